mod common;

use common::*;
use hme_core::hermite::{hermite_eval, hermite_roots};
use hme_core::hme::*;
use hme_core::moment::{
    assemble_grad_jacobian, primitive_to_conserved, ConservedMoments, MomentState,
};
use hme_core::solver::conservative_flux;
use hme_core::Error;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn regularized_determinant_is_scaled_hermite() {
    let mut rng = rng(21);
    let w = random_state(&mut rng, 5);
    let a = dense(&assemble_regularized_jacobian(&w));
    for _ in 0..20 {
        let lambda = rng.gen_range(-8.0..8.0);
        let x = (lambda - w.u()) / w.theta().sqrt();
        let want = w.theta().powf(3.0) * he(6, x);
        let got = char_det(&a, lambda);
        assert!((got - want).abs() <= 1e-9 * want.abs().max(got.abs()));
    }
}

#[test]
fn only_last_row_is_modified() {
    let mut rng = rng(22);
    for m in 2..=8 {
        let w = random_state(&mut rng, m);
        let (a, b) = (
            assemble_grad_jacobian(&w),
            assemble_regularized_jacobian(&w),
        );
        for i in 0..m {
            assert_eq!(a.row(i), b.row(i));
        }
        let eq = MomentState::equilibrium(m, w.rho(), w.u(), w.theta()).unwrap();
        assert_eq!(
            assemble_grad_jacobian(&eq),
            assemble_regularized_jacobian(&eq)
        );
    }
}

#[test]
fn regularization_examples() {
    let w = MomentState::new(1.0, 0.0, 1.0, vec![1.0, 2.0]).unwrap();
    assert!((regularization_term(&w, 0.5, -1.0) - 2.5).abs() < 1e-15);
    let m2 = MomentState::equilibrium(2, 3.0, 1.0, 2.0).unwrap();
    assert_eq!(regularization_term(&m2, 7.0, -3.0), 0.0);
    let eq = MomentState::new(1.0, 0.0, 1.0, vec![0.4, 0.0, 0.0]).unwrap();
    assert_eq!(regularization_term(&eq, 1.0, 1.0), 0.0);
}

#[test]
fn eigenvector_components() {
    let mut rng = rng(23);
    for m in 2..=10 {
        let w = random_state(&mut rng, m);
        let es = eigen_structure(&w).unwrap();
        for (r, c) in es.vectors.iter().zip(&es.roots) {
            assert_eq!(r[0], w.rho());
            if m == 3 {
                let want = hermite_eval(3, *c) / 6.0 * w.rho() * w.theta().powf(1.5);
                assert!((r[3] - want).abs() <= 1e-12 * want.abs().max(1.0));
            }
        }
        assert!(es.speeds.windows(2).all(|p| p[0] < p[1]));
    }
}

#[test]
fn genuine_nonlinearity_by_finite_differences() {
    let mut rng = rng(24);
    for m in 2..=8 {
        for _ in 0..20 {
            let w = random_state(&mut rng, m);
            for family in 1..=m + 1 {
                let (_, value) = field_character(family, &w).unwrap();
                let c = hermite_roots(m + 1).unwrap()[family - 1];
                let r = eigenvector(&w, c);
                let speed = |p: &[f64]| p[1] + c * p[2].sqrt();
                let h = 1e-3 / r.iter().fold(1.0f64, |a, v| a.max(v.abs()));
                let fd = directional_derivative(speed, &w.to_vector(), &r, h);
                if c == 0.0 {
                    assert_eq!(value, 0.0);
                    assert!(fd.abs() <= 1e-9, "M={m} j={family}: {fd}");
                } else {
                    assert!(
                        (fd - value).abs() <= 1e-6 * value.abs(),
                        "M={m} j={family}: {fd} vs {value}"
                    );
                }
            }
        }
    }
}

#[test]
fn speeds_along_rarefaction_curves() {
    let mut rng = rng(25);
    for m in 2..=7 {
        let w0 = random_state(&mut rng, m);
        for family in 1..=m + 1 {
            let c = hermite_roots(m + 1).unwrap()[family - 1];
            if c == 0.0 {
                assert!(matches!(
                    rarefaction_curve(&w0, family, 0.1),
                    Err(Error::LinearlyDegenerate { .. })
                ));
                continue;
            }
            let s0 = family_speed(&w0, family).unwrap();
            for zeta in [-0.7, -0.2, 0.3, 0.9] {
                let w = rarefaction_curve(&w0, family, zeta).unwrap();
                let s = family_speed(&w, family).unwrap();
                assert_eq!((s - s0).signum(), (c * zeta).signum());
                let predicted = 0.5 * (c * c + 1.0) * (w.u() - w0.u());
                assert!((s - s0 - predicted).abs() <= 1e-10 * (s - s0).abs().max(1.0));
            }
            let same = rarefaction_curve(&w0, family, 0.0).unwrap();
            assert_eq!(same, w0);
        }
    }
}

#[test]
fn invariants_constant_along_curves() {
    let mut rng = rng(26);
    for m in 2..=8 {
        let w0 = random_state(&mut rng, m);
        for family in 1..=m + 1 {
            let Ok(base) = riemann_invariants(&w0, family) else {
                continue;
            };
            if field_character(family, &w0).unwrap().0 == FieldCharacter::LinearlyDegenerate {
                continue;
            }
            for zeta in [-0.5, -0.25, 0.25, 0.5] {
                let w = rarefaction_curve(&w0, family, zeta).unwrap();
                let now = riemann_invariants(&w, family).unwrap();
                for (k, (a, b)) in base.iter().zip(&now).enumerate() {
                    // R_k for k >= 3 sums terms of size ρ θ^{k/2}, which grow
                    // quickly along fast families and cancel
                    let term = |v: &MomentState| v.rho() * v.theta().powf(0.5 * (k + 1) as f64);
                    let scale = if k < 2 {
                        a.abs()
                    } else {
                        a.abs().max(term(&w0)).max(term(&w))
                    };
                    assert!(
                        (a - b).abs() <= 1e-6 * scale,
                        "M={m} j={family} k={k}: {a} vs {b}"
                    );
                }
            }
        }
    }
}

#[test]
fn contact_invariants() {
    let w = MomentState::new(1.5, 0.2, 0.8, vec![0.3, 0.1]).unwrap();
    let inv = riemann_invariants(&w, 3).unwrap();
    assert!((inv[0] - w.pressure()).abs() < 1e-14);
    assert_eq!(inv[1], w.u());
    assert!((inv[2] - 0.3).abs() < 1e-15);
    assert_eq!(
        field_character(3, &w).unwrap().0,
        FieldCharacter::LinearlyDegenerate
    );
    for j in 1..=4 {
        let w3 = MomentState::new(1.0, 0.0, 1.0, vec![0.2]).unwrap();
        assert_eq!(
            field_character(j, &w3).unwrap().0,
            FieldCharacter::GenuinelyNonlinear
        );
    }
}

#[test]
fn rarefaction_classification() {
    let mut rng = rng(27);
    for m in 2..=6 {
        let w0 = random_state(&mut rng, m);
        for family in 1..=m + 1 {
            let c = hermite_roots(m + 1).unwrap()[family - 1];
            if c == 0.0 {
                continue;
            }
            // entropy-ordered: the family speed increases from left to right
            let right = rarefaction_curve(&w0, family, 0.3 * c.signum()).unwrap();
            assert!(family_speed(&right, family).unwrap() > family_speed(&w0, family).unwrap());
            let cls = classify_wave(&w0, &right, family).unwrap();
            assert_eq!(cls.kind, WaveKind::Rarefaction, "M={m} j={family}");
        }
    }
}

/// Right state on the Hugoniot locus of `left` for the given density and
/// temperature, with `u_R < u_L`.
fn hugoniot_partner(left: &MomentState, rho_r: f64, theta_r: f64) -> MomentState {
    let p_r = rho_r * theta_r;
    let du = ((left.rho() - rho_r) * (left.pressure() - p_r) / (left.rho() * rho_r)).sqrt();
    MomentState::equilibrium(left.order(), rho_r, left.u() - du, theta_r).unwrap()
}

#[test]
fn shock_classification() {
    // c_j > 0: density and pressure fall across the shock
    let l = MomentState::equilibrium(4, 2.0, 0.0, 1.5).unwrap();
    let r = hugoniot_partner(&l, 1.0, 1.0);
    let s = shock_speed(&l, &r).unwrap();
    assert!((s.speed - 1.0).abs() < 1e-14);
    assert!(s.residual().abs() < 1e-12);
    let admissible: Vec<usize> = (1..=5)
        .filter(|&j| check_entropy(&l, &r, j, s.speed).unwrap())
        .collect();
    assert_eq!(admissible, vec![4]);
    assert_eq!(classify_wave(&l, &r, 4).unwrap().kind, WaveKind::Shock);

    // c_j < 0: mirror image
    let l = MomentState::equilibrium(4, 1.0, 1.0, 1.0).unwrap();
    let r = hugoniot_partner(&l, 2.0, 1.5);
    let s = shock_speed(&l, &r).unwrap();
    assert!(s.residual().abs() < 1e-12);
    assert!(check_entropy(&l, &r, 2, s.speed).unwrap());
    let cls = classify_wave(&l, &r, 2).unwrap();
    assert!(cls.c < 0.0 && cls.p_left < cls.p_right);
    assert_eq!(cls.kind, WaveKind::Shock);
}

#[test]
fn contact_classification() {
    let l = MomentState::new(2.0, 0.3, 1.0, vec![0.1, 0.2]).unwrap();
    let r = MomentState::new(1.0, 0.3, 2.0, vec![0.1, -0.4]).unwrap();
    assert_eq!(classify_wave(&l, &r, 3).unwrap().kind, WaveKind::Contact);
    let r = MomentState::new(1.0, 0.3, 2.0, vec![0.2, -0.4]).unwrap();
    assert_eq!(
        classify_wave(&l, &r, 3).unwrap().kind,
        WaveKind::NotElementary
    );
}

#[test]
fn shock_speed_examples() {
    let l = MomentState::equilibrium(2, 2.0, 1.0, 1.0).unwrap();
    let r = MomentState::equilibrium(2, 1.0, -1.0, 1.0).unwrap();
    assert!((shock_speed(&l, &r).unwrap().speed - 3.0).abs() < 1e-15);
    assert!(matches!(shock_speed(&l, &l), Err(Error::DegenerateJump(_))));
    assert!(!check_entropy(&l, &l, 1, 0.0).unwrap());
}

#[test]
fn rankine_hugoniot_rows_of_the_flux() {
    // q_R - q_L = δ S^j / j! satisfies (j+1) Δq_{j+1} = S Δq_j for every j < M
    let mut rng = rng(28);
    for m in 2..=8 {
        for _ in 0..20 {
            let left = random_state(&mut rng, m);
            let ql = primitive_to_conserved(&left);
            let speed: f64 = rng.gen_range(-2.0..2.0);
            let delta = rng.gen_range(0.05..0.5) * left.rho();
            let qr: Vec<f64> = ql
                .as_slice()
                .iter()
                .enumerate()
                .map(|(j, q)| q + delta * speed.powi(j as i32) / fact(j))
                .collect();
            let qr = ConservedMoments::new(qr).unwrap();
            let Ok(right) = hme_core::moment::conserved_to_primitive(&qr) else {
                continue;
            };
            let s = shock_speed(&left, &right).unwrap();
            assert!((s.speed - speed).abs() <= 1e-10 * speed.abs().max(1.0));
            assert!(s.residual().abs() <= 1e-9 * speed.abs().max(1.0));
            let (fl, fr) = (
                conservative_flux(&ql).unwrap(),
                conservative_flux(&qr).unwrap(),
            );
            for j in 0..m {
                let lhs = fl[j] - fr[j];
                let rhs = speed * (ql.as_slice()[j] - qr.as_slice()[j]);
                assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(fl[j].abs()).max(1.0));
            }
        }
    }
}

proptest! {
    #[test]
    fn hugoniot_pairs_have_consistent_speeds(
        rho_l in 1.0f64..10.0,
        u_l in -2.0f64..2.0,
        theta_l in 0.5f64..4.0,
        rho_frac in 0.1f64..0.9,
        p_frac in 0.1f64..0.9,
    ) {
        let l = MomentState::equilibrium(3, rho_l, u_l, theta_l).unwrap();
        let rho_r = rho_frac * rho_l;
        let theta_r = p_frac * l.pressure() / rho_r;
        let r = hugoniot_partner(&l, rho_r, theta_r);
        let s = shock_speed(&l, &r).unwrap();
        // both speeds are quotients of differences; bound the rounding by
        // the size of the summands over the size of the denominators
        let (ml, mr) = (l.rho() * l.u(), r.rho() * r.u());
        let cond_mass = (ml.abs() + mr.abs()) / (l.rho() - r.rho()).abs();
        let cond_mom = (ml * l.u()).abs() + l.pressure() + (mr * r.u()).abs() + r.pressure();
        let cond = cond_mass + cond_mom / (ml - mr).abs();
        prop_assert!(s.residual().abs() <= 1e-13 * cond.max(1.0), "{:?}", s);
        prop_assert!(r.u() < l.u());
    }

    #[test]
    fn eigen_residual(seed in any::<u64>(), m in 2usize..=10) {
        let w = random_state(&mut rng(seed), m);
        let a = assemble_regularized_jacobian(&w);
        let es = eigen_structure(&w).unwrap();
        for (s, r) in es.speeds.iter().zip(&es.vectors) {
            let ar = a.mul_vec(r);
            let norm = r.iter().fold(0.0f64, |x, v| x.max(v.abs()));
            for (x, y) in ar.iter().zip(r) {
                prop_assert!((x - s * y).abs() <= 1e-9 * norm);
            }
        }
    }
}
