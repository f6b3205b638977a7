use super::verify::{
    iota_certificate, verify_beta_certificate, verify_gamma_certificate, verify_independent_set,
};
use super::{ParamCertificate, Parameter, Witness};
use crate::channels::{self, QuantumChannel};
use crate::error::{Error, Result};
use crate::graphs::VectorTuple;
use crate::numkernel::{kron, CMatrix, Tolerance};
use crate::opsys::{self, OperatorSystem};

fn replay(s: &OperatorSystem, template: &ParamCertificate, w: Witness, tol: &Tolerance) -> Result<ParamCertificate> {
    match (template.parameter(), w) {
        (Parameter::Alpha, Witness::Vectors(x)) => verify_independent_set(s, &x),
        (Parameter::Beta, Witness::Channel(ch)) => verify_beta_certificate(s, &ch, tol),
        (Parameter::Gamma, Witness::Channel(ch)) => verify_gamma_certificate(s, &ch, tol),
        (Parameter::Inter, Witness::Channel(ch)) => iota_certificate(s, &ch, tol),
        (p, w) => Err(Error::InvalidInput(format!(
            "cannot transform a {} certificate with a {} witness",
            p.name(),
            w.kind()
        ))),
    }
}

fn columns(x: &VectorTuple) -> Vec<CMatrix> {
    x.vectors()
        .iter()
        .map(|v| CMatrix::from_column_slice(v.len(), 1, v))
        .collect()
}

fn tuple(k: usize, cols: Vec<CMatrix>) -> Result<VectorTuple> {
    VectorTuple::new(k, cols.into_iter().map(|m| m.as_slice().to_vec()).collect())
}

fn same_kind(a: &ParamCertificate, b: &ParamCertificate) -> Result<()> {
    if a.parameter() != b.parameter() || a.direction() != b.direction() {
        return Err(Error::InvalidInput(format!(
            "certificates bound different parameters ({} and {})",
            a.parameter().name(),
            b.parameter().name()
        )));
    }
    Ok(())
}

/// Map a certificate for `S` to one for `U* S U`: Kraus operators become
/// `A_p U`, independent vectors become `U* x_p`. The result is re-verified.
pub fn conjugate_certificate(
    s: &OperatorSystem,
    cert: &ParamCertificate,
    u: &CMatrix,
    tol: &Tolerance,
) -> Result<ParamCertificate> {
    let target = opsys::conjugate(s, u)?;
    let w = match cert.witness() {
        Witness::Vectors(x) => Witness::Vectors(tuple(
            x.k(),
            columns(x).iter().map(|v| u.adjoint() * v).collect(),
        )?),
        Witness::Channel(ch) => Witness::Channel(QuantumChannel::new(
            ch.n(),
            ch.k(),
            ch.kraus().iter().map(|a| a * u).collect(),
        )?),
        other => return replay(&target, cert, other.clone(), tol),
    };
    replay(&target, cert, w, tol)
}

/// Combine certificates for `S1` and `S2` into one for `S1 (+) S2` of value
/// `v1 + v2` (block-diagonal Kraus operators or padded vectors).
pub fn direct_sum_certificate(
    s1: &OperatorSystem,
    c1: &ParamCertificate,
    s2: &OperatorSystem,
    c2: &ParamCertificate,
    tol: &Tolerance,
) -> Result<ParamCertificate> {
    same_kind(c1, c2)?;
    let target = opsys::oplus(s1, s2);
    let (n1, n2) = (s1.n(), s2.n());
    let w = match (c1.witness(), c2.witness()) {
        (Witness::Vectors(x), Witness::Vectors(y)) => {
            let mut cols = Vec::new();
            for v in columns(x) {
                let mut z = CMatrix::zeros(n1 + n2, 1);
                z.view_mut((0, 0), (n1, 1)).copy_from(&v);
                cols.push(z);
            }
            for v in columns(y) {
                let mut z = CMatrix::zeros(n1 + n2, 1);
                z.view_mut((n1, 0), (n2, 1)).copy_from(&v);
                cols.push(z);
            }
            Witness::Vectors(tuple(n1 + n2, cols)?)
        }
        (Witness::Channel(a), Witness::Channel(b)) => {
            let k = a.k() + b.k();
            let mut kraus = Vec::new();
            for m in a.kraus() {
                let mut z = CMatrix::zeros(k, n1 + n2);
                z.view_mut((0, 0), (a.k(), n1)).copy_from(m);
                kraus.push(z);
            }
            for m in b.kraus() {
                let mut z = CMatrix::zeros(k, n1 + n2);
                z.view_mut((a.k(), n1), (b.k(), n2)).copy_from(m);
                kraus.push(z);
            }
            Witness::Channel(QuantumChannel::new(n1 + n2, k, kraus)?)
        }
        _ => {
            return Err(Error::InvalidInput(
                "direct sums need two vector or two channel witnesses".into(),
            ))
        }
    };
    replay(&target, c1, w, tol)
}

/// Combine certificates for `S1` and `S2` into one for `S1 (x) S2` of value
/// `v1 * v2` (Kronecker products of witnesses).
pub fn tensor_certificate(
    s1: &OperatorSystem,
    c1: &ParamCertificate,
    s2: &OperatorSystem,
    c2: &ParamCertificate,
    tol: &Tolerance,
) -> Result<ParamCertificate> {
    same_kind(c1, c2)?;
    let target = opsys::tensor(s1, s2);
    let w = match (c1.witness(), c2.witness()) {
        (Witness::Vectors(x), Witness::Vectors(y)) => {
            let (xs, ys) = (columns(x), columns(y));
            let cols = xs
                .iter()
                .flat_map(|a| ys.iter().map(move |b| kron(a, b)))
                .collect();
            Witness::Vectors(tuple(s1.n() * s2.n(), cols)?)
        }
        (Witness::Channel(a), Witness::Channel(b)) => Witness::Channel(channels::tensor(a, b)?),
        _ => {
            return Err(Error::InvalidInput(
                "tensor products need two vector or two channel witnesses".into(),
            ))
        }
    };
    replay(&target, c1, w, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{identity_channel, realize};
    use crate::graphs::Graph;
    use crate::opsys::{graph_system, scalar_system, sk_system};
    use crate::random::{random_operator_system, random_unitary, rng_from_seed};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn conjugated_gamma_certificate() {
        let mut rng = rng_from_seed(11);
        let s = random_operator_system(3, 2, &mut rng).unwrap();
        let ch = realize(&s, &tol()).unwrap();
        let cert = verify_gamma_certificate(&s, &ch, &tol()).unwrap();
        assert!(cert.is_verified());
        let u = random_unitary(3, &mut rng);
        let moved = conjugate_certificate(&s, &cert, &u, &tol()).unwrap();
        assert!(moved.is_verified());
        assert_eq!(moved.value(), cert.value());
        let x = VectorTuple::standard(5, &[0, 2]);
        let c5 = graph_system(&Graph::cycle(5));
        let a = verify_independent_set(&c5, &x).unwrap();
        let u5 = random_unitary(5, &mut rng);
        assert!(conjugate_certificate(&c5, &a, &u5, &tol()).unwrap().is_verified());
    }

    #[test]
    fn sums_and_products() {
        let s1 = scalar_system(2);
        let s2 = sk_system(2);
        let c1 = verify_gamma_certificate(&s1, &identity_channel(2), &tol()).unwrap();
        let c2 = verify_gamma_certificate(&s2, &realize(&s2, &tol()).unwrap(), &tol()).unwrap();
        let sum = direct_sum_certificate(&s1, &c1, &s2, &c2, &tol()).unwrap();
        assert!(sum.is_verified());
        assert_eq!(sum.value(), c1.value() + c2.value());
        let prod = tensor_certificate(&s1, &c1, &s2, &c2, &tol()).unwrap();
        assert!(prod.is_verified());
        assert_eq!(prod.value(), c1.value() * c2.value());

        let c5 = graph_system(&Graph::cycle(5));
        let a = verify_independent_set(&c5, &VectorTuple::standard(5, &[0, 2])).unwrap();
        let aa = tensor_certificate(&c5, &a, &c5, &a, &tol()).unwrap();
        assert!(aa.is_verified() && aa.value() == 4);
        let a2 = direct_sum_certificate(&c5, &a, &c5, &a, &tol()).unwrap();
        assert!(a2.is_verified() && a2.value() == 4);
        assert!(direct_sum_certificate(&c5, &a, &s1, &c1, &tol()).is_err());
    }
}
