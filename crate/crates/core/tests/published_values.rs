use std::f64::consts::{FRAC_1_SQRT_2, PI};

use qshi_core::protocol::{
    bell_state, coincidence_frame, coincidence_label, feed_forward_constraints, BellLabel,
    CoincidenceSpin, Congruence,
};
use qshi_core::ring::{RingGeometry, DEFAULT_INNER_RADIUS, DEFAULT_OUTER_RADIUS};
use qshi_core::state::SpinState;

#[test]
fn bob_adjustment_table() {
    let rows: Vec<[String; 3]> = BellLabel::ALL
        .iter()
        .map(|&l| {
            let r = feed_forward_constraints(l);
            [r.flip_text(), r.tunnel_text(), r.preserve_text()]
        })
        .collect();
    let expected = [
        ["f_bB = +f_aB*", "t_aB = t_bB*", "p_aB = p_bB = 0"],
        ["f_bB = -f_aB*", "t_aB = t_bB*", "p_aB = p_bB = 0"],
        ["f_aB = f_bB = 0", "t_aB = t_bB*", "p_bB = +p_aB*"],
        ["f_aB = f_bB = 0", "t_aB = t_bB*", "p_bB = -p_aB*"],
    ];
    for (row, want) in rows.iter().zip(expected) {
        assert_eq!(row.each_ref().map(String::as_str), want);
    }
    let plus = feed_forward_constraints(BellLabel::PhiPlus);
    let minus = feed_forward_constraints(BellLabel::PhiMinus);
    assert_eq!((plus.tunnel, plus.preserve), (minus.tunnel, minus.preserve));
    assert_ne!(plus.flip, minus.flip);
    assert_eq!(plus.congruence, Congruence::Cg1);
    assert_eq!(
        feed_forward_constraints(BellLabel::PsiMinus).congruence,
        Congruence::Cg2
    );
}

#[test]
fn bell_states_and_coincidence_frames() {
    let h = FRAC_1_SQRT_2;
    assert_eq!(
        bell_state(BellLabel::PhiPlus),
        SpinState::from_real(&[h, 0.0, 0.0, h]).unwrap()
    );
    use CoincidenceSpin::{Down, Up};
    let table = [
        (BellLabel::PhiPlus, (Up, Up)),
        (BellLabel::PhiMinus, (Down, Down)),
        (BellLabel::PsiPlus, (Up, Down)),
        (BellLabel::PsiMinus, (Down, Up)),
    ];
    for (label, frame) in table {
        assert_eq!(coincidence_label(label), frame);
        assert_eq!(coincidence_frame(frame.0, frame.1), bell_state(label));
    }
    assert_eq!(
        coincidence_frame(Down, Up),
        SpinState::from_real(&[0.0, h, -h, 0.0]).unwrap()
    );
}

#[test]
fn device_radii() {
    assert_eq!((DEFAULT_INNER_RADIUS, DEFAULT_OUTER_RADIUS), (130.0, 230.0));
    let g = RingGeometry::default();
    let outer: f64 = (1..=4).map(|i| g.l(i)).sum();
    let inner: f64 = (5..=7).map(|i| g.l(i)).sum();
    assert!((outer - 2.0 * PI * 230.0).abs() < 1e-9);
    assert!((inner - 2.0 * PI * 130.0).abs() < 1e-9);
    assert!(g.is_circular_symmetric());
}
