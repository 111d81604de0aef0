mod common;

use adaptive_euler::euler::{GasConfig, PrimitiveState};
use adaptive_euler::limiters::{sbm, LimiterParams};
use proptest::prelude::*;

#[test]
fn sbm_symmetry_and_minmod2() {
    common::sbm_checks().unwrap();
}

#[test]
fn omega_annihilates_low_degree_polynomials() {
    common::omega_annihilation().unwrap();
}

#[test]
fn fluxes_are_consistent() {
    common::flux_consistency().unwrap();
}

#[test]
fn basis_diagonalizes_jacobian() {
    common::basis_diagonality().unwrap();
}

#[test]
fn indicator_is_scale_invariant() {
    common::indicator_scale_invariance().unwrap();
}

#[test]
fn eos_round_trip() {
    common::eos_round_trip().unwrap();
}

proptest! {
    #[test]
    fn sbm_stays_in_tvd_region(r in -10.0f64..10.0, tau in -0.25f64..0.5) {
        let p = LimiterParams::new(2.0, tau).unwrap();
        let phi = sbm(r, &p);
        prop_assert!(phi >= 0.0);
        prop_assert!(phi <= 2.0f64.max(2.0 * r) + 1e-12);
    }

    #[test]
    fn conserved_round_trip_1d(rho in 0.01f64..100.0, u in -10.0f64..10.0, p in 0.01f64..1000.0) {
        let gas = GasConfig::new(1.4).unwrap();
        let s = PrimitiveState::new_1d(rho, u, p);
        let b = PrimitiveState::from_conserved_1d(&s.to_conserved_1d(&gas), &gas);
        prop_assert!((b.rho - rho).abs() <= 1e-14 * rho);
        prop_assert!((b.u - u).abs() <= 1e-13 * u.abs().max(1.0));
        let kin = 0.5 * rho * u * u;
        prop_assert!((b.p - p).abs() <= 1e-14 * (p + kin) * 4.0);
    }
}
