use super::{Direction, ParamCertificate, Parameter, Witness};
use crate::channels::{confusability_system, ProjectionTuple, QuantumChannel};
use crate::error::{Error, Result};
use crate::graphs::{non_orthogonality_graph_proj, Graph, VectorTuple};
use crate::numkernel::{max_abs, CMatrix, Tolerance};
use crate::opsys::OperatorSystem;

/// Residual below which a matrix counts as lying in a subspace.
pub(crate) const MEMBERSHIP_SLACK: f64 = 1e-8;

fn check_input_dim(s: &OperatorSystem, n: usize) -> Result<()> {
    if s.n() != n {
        return Err(Error::AmbientMismatch {
            left: s.n(),
            right: n,
        });
    }
    Ok(())
}

/// Largest component inside `S` of `x_p x_q*` over `p != q`, with unit vectors.
pub(crate) fn independence_defect(s: &OperatorSystem, x: &VectorTuple) -> Result<f64> {
    let m = x.len();
    let units: Vec<CMatrix> = x
        .vectors()
        .iter()
        .map(|v| CMatrix::from_column_slice(v.len(), 1, v).unscale(crate::graphs::norm(v)))
        .collect();
    let mut worst: f64 = 0.0;
    for p in 0..m {
        for q in 0..m {
            if p != q {
                let outer = &units[p] * units[q].adjoint();
                worst = worst.max(s.perp_residual(&outer)?);
            }
        }
    }
    Ok(worst)
}

/// `x` is `S`-independent when every `x_p x_q*` (`p != q`) lies in `S^perp`;
/// a pass certifies `alpha(S) >= m`.
pub fn verify_independent_set(s: &OperatorSystem, x: &VectorTuple) -> Result<ParamCertificate> {
    check_input_dim(s, x.k())?;
    let defect = independence_defect(s, x)?;
    Ok(ParamCertificate::new(
        Parameter::Alpha,
        Direction::Lower,
        x.len(),
        Witness::Vectors(x.clone()),
        defect < MEMBERSHIP_SLACK,
        defect,
    ))
}

/// Passes iff `S_Phi = S`; certifies `gamma(S) <= k`. On failure the
/// residual is the largest principal angle.
pub fn verify_gamma_certificate(
    s: &OperatorSystem,
    ch: &QuantumChannel,
    tol: &Tolerance,
) -> Result<ParamCertificate> {
    check_input_dim(s, ch.n())?;
    let (ok, angle) = match confusability_system(ch, tol) {
        Ok(sp) => {
            let angle = sp.max_principal_angle(s)?;
            (sp.equals(s, tol)?, angle)
        }
        Err(Error::InvalidChannel(_)) => (false, f64::INFINITY),
        Err(e) => return Err(e),
    };
    Ok(ParamCertificate::new(
        Parameter::Gamma,
        Direction::Upper,
        ch.k(),
        Witness::Channel(ch.clone()),
        ok,
        angle,
    ))
}

/// Passes iff `S_Phi` is contained in `S`; certifies `beta(S) <= k`.
pub fn verify_beta_certificate(
    s: &OperatorSystem,
    ch: &QuantumChannel,
    tol: &Tolerance,
) -> Result<ParamCertificate> {
    check_input_dim(s, ch.n())?;
    let (ok, residual) = match confusability_system(ch, tol) {
        Ok(sp) => {
            let r = s.space().containment_residual(sp.space())?;
            (r < MEMBERSHIP_SLACK, r)
        }
        Err(Error::InvalidChannel(_)) => (false, f64::INFINITY),
        Err(e) => return Err(e),
    };
    Ok(ParamCertificate::new(
        Parameter::Beta,
        Direction::Upper,
        ch.k(),
        Witness::Channel(ch.clone()),
        ok,
        residual,
    ))
}

/// Each Kraus operator has the form `A D` with `A` entrywise non-negative and
/// `D` invertible diagonal: within every column the non-zero entries share
/// one phase.
pub fn verify_noncancelling(ch: &QuantumChannel) -> bool {
    ch.kraus().iter().all(|a| {
        let scale = max_abs(a);
        (0..a.ncols()).all(|j| {
            let mut phase: Option<f64> = None;
            a.column(j).iter().all(|z| {
                if z.norm() <= 1e-10 * scale {
                    return true;
                }
                let arg = z.arg();
                match phase {
                    None => {
                        phase = Some(arg);
                        true
                    }
                    Some(p) => {
                        let d = (arg - p).rem_euclid(2.0 * std::f64::consts::PI);
                        d.min(2.0 * std::f64::consts::PI - d) < 1e-8
                    }
                }
            })
        })
    })
}

/// A gamma certificate whose channel is also non-cancelling bounds the
/// intersection number.
pub fn iota_certificate(
    s: &OperatorSystem,
    ch: &QuantumChannel,
    tol: &Tolerance,
) -> Result<ParamCertificate> {
    let g = verify_gamma_certificate(s, ch, tol)?;
    let ok = g.is_verified() && verify_noncancelling(ch);
    let residual = g.residual();
    Ok(ParamCertificate::new(
        Parameter::Inter,
        Direction::Upper,
        ch.k(),
        Witness::Channel(ch.clone()),
        ok,
        residual,
    ))
}

/// Projections in `M_k` with non-orthogonality graph `G` bound the quantum
/// intersection number (and so `gamma(G)`) by `k`.
pub fn qinter_certificate(g: &Graph, p: &ProjectionTuple) -> ParamCertificate {
    let ok = p.len() == g.n() && non_orthogonality_graph_proj(p) == *g;
    ParamCertificate::new(
        Parameter::Qinter,
        Direction::Upper,
        p.k(),
        Witness::Projections(p.clone()),
        ok,
        if ok { 0.0 } else { 1.0 },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{identity_channel, trace_channel};
    use crate::numkernel::{c, from_real};
    use crate::opsys::{full_system, graph_system, scalar_system, sk_system};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn prop_iv9_channel() -> QuantumChannel {
        let s = 0.5f64.sqrt();
        let a1 = from_real(3, 2, &[s, 0.0, 0.0, 0.0, 0.0, s]);
        let a2 = from_real(3, 2, &[0.0, 0.0, 0.0, s, s, 0.0]);
        QuantumChannel::new(2, 3, vec![a1, a2]).unwrap()
    }

    #[test]
    fn independent_sets() {
        let basis = VectorTuple::standard(3, &[0, 1, 2]);
        let cert = verify_independent_set(&scalar_system(3), &basis).unwrap();
        assert!(cert.is_verified());
        assert_eq!(cert.value(), 3);
        let two = VectorTuple::standard(2, &[0, 1]);
        assert!(!verify_independent_set(&full_system(2), &two).unwrap().is_verified());
        let c5 = graph_system(&Graph::cycle(5));
        let pair = VectorTuple::standard(5, &[0, 2]);
        assert!(verify_independent_set(&c5, &pair).unwrap().is_verified());
        let adjacent = VectorTuple::standard(5, &[0, 1]);
        assert!(!verify_independent_set(&c5, &adjacent).unwrap().is_verified());
        assert!(matches!(
            verify_independent_set(&c5, &two),
            Err(Error::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn gamma_and_beta() {
        let s2 = sk_system(2);
        let ch = prop_iv9_channel();
        let g = verify_gamma_certificate(&s2, &ch, &tol()).unwrap();
        assert!(g.is_verified());
        assert_eq!(g.value(), 3);
        let id = verify_gamma_certificate(&scalar_system(4), &identity_channel(4), &tol()).unwrap();
        assert!(id.is_verified() && id.value() == 4);
        let b = verify_beta_certificate(&s2, &identity_channel(2), &tol()).unwrap();
        assert!(b.is_verified() && b.value() == 2);
        // the trace channel only fits inside the full matrix algebra
        assert!(!verify_beta_certificate(&s2, &trace_channel(2), &tol()).unwrap().is_verified());
        assert!(verify_beta_certificate(&full_system(2), &trace_channel(2), &tol())
            .unwrap()
            .is_verified());
        let wrong = verify_gamma_certificate(&s2, &identity_channel(2), &tol()).unwrap();
        assert!(!wrong.is_verified());
        assert!(wrong.residual() > 1.0);
    }

    #[test]
    fn noncancelling_examples() {
        assert!(verify_noncancelling(&prop_iv9_channel()));
        assert!(verify_noncancelling(&identity_channel(3)));
        assert!(verify_noncancelling(&trace_channel(3)));
        let h = from_real(2, 2, &[1.0, 1.0, 1.0, -1.0]).unscale(2f64.sqrt());
        let hadamard = QuantumChannel::new(2, 2, vec![h]).unwrap();
        assert!(!verify_noncancelling(&hadamard));
        let phased = QuantumChannel::new(
            1,
            2,
            vec![CMatrix::from_column_slice(2, 1, &[c(0.0, 0.6), c(0.0, 0.8)])],
        )
        .unwrap();
        assert!(verify_noncancelling(&phased));
        let cert = iota_certificate(&sk_system(2), &prop_iv9_channel(), &tol()).unwrap();
        assert!(cert.is_verified() && cert.value() == 3);
    }

    #[test]
    fn qinter_from_sets() {
        let g = Graph::cycle(5);
        let w = crate::graphs::intersection_number(&g).unwrap();
        let p = ProjectionTuple::diagonal_from_sets(w.m, &w.family).unwrap();
        let cert = qinter_certificate(&g, &p);
        assert!(cert.is_verified());
        assert_eq!(cert.value(), 5);
        assert!(!qinter_certificate(&Graph::complete(5), &p).is_verified());
    }
}
