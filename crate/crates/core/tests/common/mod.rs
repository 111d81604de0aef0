//! Independent oracles for the kernel-level checks, shared by the property
//! tests and the acceptance run.
#![allow(dead_code)]

use adaptive_euler::euler::{
    characteristic_basis, physical_flux, Axis, GasConfig, PrimitiveState,
};
use adaptive_euler::indicator::indicator_1d;
use adaptive_euler::ldcu::ldcu_flux;
use adaptive_euler::limiters::{sbm, LimiterParams};
use adaptive_euler::quasilinear::{l_flux, omega_correction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<String, String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state_2d(rng: &mut ChaCha8Rng) -> PrimitiveState<f64> {
    PrimitiveState::new_2d(
        rng.gen_range(0.05..10.0),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(0.05..20.0),
    )
}

/// Textbook generalized minmod with theta = 2.
pub fn minmod2_reference(r: f64) -> f64 {
    (2.0 * r).min(0.5 * (1.0 + r)).min(2.0).max(0.0)
}

pub fn sbm_checks() -> Check {
    let mut rng = rng(7);
    let over = LimiterParams::overcompressive();
    let mm2 = LimiterParams::minmod2();
    let mut max_dev = 0.0f64;
    for n in 0..10_000 {
        // half uniform on (-2, 6), half log-spread over many decades
        let r: f64 = if n % 2 == 0 {
            rng.gen_range(-2.0..6.0)
        } else {
            10f64.powf(rng.gen_range(-6.0..6.0))
        };
        if r > 0.0 {
            for p in [&over, &mm2] {
                let lhs = sbm(r, p);
                let rhs = r * sbm(1.0 / r, p);
                if (lhs - rhs).abs() > 1e-15 * lhs.abs().max(1.0) * r.max(1.0) {
                    return Err(format!("symmetry broken at r = {r}: {lhs} vs {rhs}"));
                }
            }
        }
        let a = sbm(r, &mm2);
        let b = minmod2_reference(r);
        max_dev = max_dev.max((a - b).abs());
        // the two forms round differently; allow a few ulps
        if (a - b).abs() > 4.0 * f64::EPSILON * b.abs().max(f64::MIN_POSITIVE) {
            return Err(format!("minmod2 mismatch at r = {r}: {a} vs {b}"));
        }
    }
    Ok(format!("10000 samples, max minmod2 deviation {max_dev:e}"))
}

pub fn omega_annihilation() -> Check {
    let mut worst = 0.0f64;
    for degree in 0..=4 {
        for shift in [-3.0, 0.0, 1.7] {
            let h = 0.1;
            let poly = |x: f64| (0..=degree).map(|k| (1.0 + k as f64) * x.powi(k)).sum::<f64>();
            let states: [[f64; 3]; 6] = std::array::from_fn(|m| {
                let x = shift + (m as f64 - 2.0) * h;
                [poly(x), 2.0 * poly(x), -poly(x)]
            });
            let w = omega_correction(&states, h, 0.01).map_err(|e| e.to_string())?;
            for v in w {
                worst = worst.max(v.abs());
            }
        }
    }
    if worst < 1e-12 {
        Ok(format!("max |omega| = {worst:e}"))
    } else {
        Err(format!("omega does not annihilate polynomials: {worst:e}"))
    }
}

fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(1e-300)
}

pub fn flux_consistency() -> Check {
    let gas = GasConfig::new(1.4).unwrap();
    let mut rng = rng(11);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let s = random_state_2d(&mut rng);
        let u2 = s.to_conserved_2d(&gas);
        let u1 = PrimitiveState::new_1d(s.rho, s.u, s.p).to_conserved_1d(&gas);
        for axis in [Axis::X, Axis::Y] {
            let f = physical_flux(&u2, axis, &gas);
            let scale = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let l = l_flux(&[f; 6]);
            let c = ldcu_flux(&u2, &u2, axis, &gas).map_err(|e| e.to_string())?;
            for d in 0..4 {
                worst = worst.max(rel(l[d], f[d], scale)).max(rel(c[d], f[d], scale));
            }
        }
        let f = physical_flux(&u1, Axis::X, &gas);
        let scale = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let c = ldcu_flux(&u1, &u1, Axis::X, &gas).map_err(|e| e.to_string())?;
        for d in 0..3 {
            worst = worst.max(rel(c[d], f[d], scale));
        }
    }
    if worst <= 1e-13 {
        Ok(format!("200 states, max relative deviation {worst:e}"))
    } else {
        Err(format!("flux inconsistency {worst:e}"))
    }
}

/// Fourth-order central-difference Jacobian of the physical flux.
pub fn fd_jacobian<const N: usize>(u: &[f64; N], axis: Axis, gas: &GasConfig<f64>) -> [[f64; N]; N] {
    let mut jac = [[0.0; N]; N];
    for col in 0..N {
        let h = 1e-4 * u[col].abs().max(u[0]);
        let eval = |s: f64| {
            let mut v = *u;
            v[col] += s * h;
            physical_flux(&v, axis, gas)
        };
        let (p1, m1, p2, m2) = (eval(1.0), eval(-1.0), eval(2.0), eval(-2.0));
        for row in 0..N {
            jac[row][col] = (8.0 * (p1[row] - m1[row]) - (p2[row] - m2[row])) / (12.0 * h);
        }
    }
    jac
}

fn mat_mul<const N: usize>(a: &[[f64; N]; N], b: &[[f64; N]; N]) -> [[f64; N]; N] {
    let mut out = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            out[i][j] = (0..N).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn diagonality<const N: usize>(u: &[f64; N], axis: Axis, gas: &GasConfig<f64>) -> Result<f64, String> {
    let basis = characteristic_basis(u, u, axis, gas).map_err(|e| e.to_string())?;
    let jac = fd_jacobian(u, axis, gas);
    let lam = mat_mul(&basis.r_inv, &mat_mul(&jac, &basis.r));
    let ident = mat_mul(&basis.r_inv, &basis.r);
    let mut scale = 0.0f64;
    for i in 0..N {
        scale = scale.max(lam[i][i].abs());
    }
    let mut worst = 0.0f64;
    for i in 0..N {
        for j in 0..N {
            let id = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ident[i][j] - id).abs());
            if i != j {
                worst = worst.max(lam[i][j].abs() / scale.max(1.0));
            }
        }
    }
    Ok(worst)
}

pub fn basis_diagonality() -> Check {
    let gas = GasConfig::new(1.4).unwrap();
    let mut rng = rng(13);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let s = random_state_2d(&mut rng);
        let u2 = s.to_conserved_2d(&gas);
        let u1 = PrimitiveState::new_1d(s.rho, s.u, s.p).to_conserved_1d(&gas);
        worst = worst.max(diagonality(&u2, Axis::X, &gas)?);
        worst = worst.max(diagonality(&u2, Axis::Y, &gas)?);
        worst = worst.max(diagonality(&u1, Axis::X, &gas)?);
    }
    if worst <= 1e-10 {
        Ok(format!("200 states, max off-diagonal {worst:e}"))
    } else {
        Err(format!("basis does not diagonalize the Jacobian: {worst:e}"))
    }
}

pub fn indicator_scale_invariance() -> Check {
    let mut rng = rng(17);
    for trial in 0..100 {
        let w: Vec<f64> = (0..40).map(|_| rng.gen_range(0.1..5.0)).collect();
        let base = indicator_1d(&w, 2, 0.2).map_err(|e| e.to_string())?;
        for k in [-6, -1, 1, 3, 10] {
            let lambda = 2f64.powi(k);
            let scaled: Vec<f64> = w.iter().map(|v| v * lambda).collect();
            let s = indicator_1d(&scaled, 2, 0.2).map_err(|e| e.to_string())?;
            if s != base {
                return Err(format!("trial {trial}: indicator changed under scaling by {lambda}"));
            }
        }
    }
    Ok("100 fields x 5 power-of-two scalings, bit-identical".into())
}

pub fn eos_round_trip() -> Check {
    let gas = GasConfig::new(1.4).unwrap();
    let mut rng = rng(19);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let s = random_state_2d(&mut rng);
        let back = PrimitiveState::from_conserved_2d(&s.to_conserved_2d(&gas), &gas);
        for (a, b) in [(s.rho, back.rho), (s.u, back.u), (s.v, back.v), (s.p, back.p)] {
            worst = worst.max((a - b).abs() / a.abs().max(1.0));
        }
    }
    if worst <= 1e-14 {
        Ok(format!("1000 states, max relative deviation {worst:e}"))
    } else {
        Err(format!("EOS round trip deviates by {worst:e}"))
    }
}
