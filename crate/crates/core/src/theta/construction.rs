use std::f64::consts::PI;

use super::{tensor_theta_witness, verify_theta_witness, ThetaWitness};
use crate::error::{Error, Result};
use crate::numkernel::{identity, max_abs, numerical_rank, CMatrix, Tolerance, C64};
use crate::opsys::{self, sk_system, sk_theta_direction, OperatorSystem};
use crate::params::{verify_eta_certificate, EtaMode, GramBlockMatrix, ParamCertificate};

/// One numerical check of the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionCheck {
    pub name: &'static str,
    pub residual: f64,
    pub pass: bool,
}

/// Subcomplexity certificate of value `k^2` and theta witness of value `k^3`
/// for `S_k (x) S_{k^2}`.
#[derive(Debug, Clone)]
pub struct BetaBetter {
    pub k: usize,
    pub system: OperatorSystem,
    pub gram: GramBlockMatrix,
    pub beta: ParamCertificate,
    pub theta: ThetaWitness,
    pub checks: Vec<ConstructionCheck>,
}

impl BetaBetter {
    /// All checks passed and the beta upper bound is below the theta lower
    /// bound.
    pub fn separated(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
            && self.beta.is_verified()
            && (self.beta.value() as f64) < self.theta.value()
    }
}

const CHECK_SLACK: f64 = 1e-10;

fn check(name: &'static str, residual: f64) -> ConstructionCheck {
    ConstructionCheck {
        name,
        residual,
        pass: residual < CHECK_SLACK,
    }
}

fn mat_pow(m: &CMatrix, e: usize) -> CMatrix {
    let mut out = identity(m.nrows());
    for _ in 0..e {
        out = &out * m;
    }
    out
}

/// With `N = k^2`, shift `S e_i = e_{i+1}`, clock `D = diag(w^j)` for
/// `w = exp(2 pi i / k)` and `u_{kr+i} = S^{kr+i} D^r`, the Gram matrix
/// `B = (u_p* u_q)` read as a `k x k` block matrix over `M_{k^3}` lies in
/// `M_k(S_k (x) S_N)`, is positive of rank `k^2` and has diagonal blocks
/// summing to `k I`.
pub fn betabetter_construction(k: usize, tol: &Tolerance) -> Result<BetaBetter> {
    if !(2..=4).contains(&k) {
        return Err(Error::InvalidInput(format!("k = {k} outside 2..=4")));
    }
    let nn = k * k;
    let omega = C64::from_polar(1.0, 2.0 * PI / k as f64);
    let mut shift = CMatrix::zeros(nn, nn);
    for i in 0..nn {
        shift[((i + 1) % nn, i)] = C64::new(1.0, 0.0);
    }
    let clock = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(nn, |j, _| omega.powu(j as u32)));

    let mut commutation: f64 = 0.0;
    for i in 0..nn {
        for j in 0..k {
            let lhs = mat_pow(&clock, j) * mat_pow(&shift, i);
            let rhs = mat_pow(&shift, i) * mat_pow(&clock, j) * omega.powu((i * j) as u32);
            commutation = commutation.max(max_abs(&(lhs - rhs)));
        }
    }

    let u: Vec<CMatrix> = (0..nn)
        .map(|p| mat_pow(&shift, p) * mat_pow(&clock, p / k))
        .collect();
    let big = nn * nn;
    let mut b = CMatrix::zeros(big, big);
    let s_n = sk_system(nn);
    let mut entries_residual: f64 = 0.0;
    for p in 0..nn {
        for q in 0..nn {
            let blk = u[p].adjoint() * &u[q];
            entries_residual = entries_residual.max(s_n.residual(&blk)?);
            b.view_mut((p * nn, q * nn), (nn, nn)).copy_from(&blk);
        }
    }

    let block = k * nn;
    let mut diagonal_residual: f64 = 0.0;
    for r in 0..k {
        for s in 0..k {
            let first = u[k * r].adjoint() * &u[k * s];
            for i in 1..k {
                let other = u[k * r + i].adjoint() * &u[k * s + i];
                diagonal_residual = diagonal_residual.max(max_abs(&(other - &first)));
            }
        }
    }
    let mut sum = identity(block) * C64::new(-(k as f64), 0.0);
    for r in 0..k {
        sum += b.view((r * block, r * block), (block, block));
    }
    let sum_residual = max_abs(&sum);
    let rank = numerical_rank(&b, tol);

    let checks = vec![
        check("commutation", commutation),
        check("entries in S_N", entries_residual),
        check("equal diagonal blocks", diagonal_residual),
        check("diagonal sum is k I", sum_residual),
        check("rank at most k^2", rank.saturating_sub(nn) as f64),
    ];

    let s_k = sk_system(k);
    let system = opsys::tensor(&s_k, &s_n);
    let gram = GramBlockMatrix::uniform(block, b.unscale(k as f64), tol)?;
    let beta = verify_eta_certificate(&system, &gram, EtaMode::Beta, tol)?;
    let w1 = verify_theta_witness(&s_k, &sk_theta_direction(k), tol)?;
    let w2 = verify_theta_witness(&s_n, &sk_theta_direction(nn), tol)?;
    let theta = tensor_theta_witness(&s_k, &w1, &s_n, &w2, tol)?;
    Ok(BetaBetter {
        k,
        system,
        gram,
        beta,
        theta,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::confusability_system;
    use crate::params::gram_to_channel;

    #[test]
    fn k_two() {
        let tol = Tolerance::default();
        let r = betabetter_construction(2, &tol).unwrap();
        for c in &r.checks {
            assert!(c.pass, "{c:?}");
        }
        assert_eq!(r.beta.value(), 4);
        assert!((r.theta.value() - 8.0).abs() < 1e-9);
        assert!(r.separated());
        // the channel read off the Gram matrix fits inside the system
        let ch = gram_to_channel(&r.gram, &tol).unwrap();
        let sp = confusability_system(&ch, &tol).unwrap();
        assert!(r.system.contains(&sp).unwrap());
        assert!(betabetter_construction(5, &tol).is_err());
    }
}
