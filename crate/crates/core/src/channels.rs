//! Quantum channels as Kraus families, and their confusability systems.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{ClassicalChannel, VectorTuple};
use crate::numkernel::{
    c, frobenius, identity, isometry_deviation, kron, matrix_unit, max_abs, numerical_rank,
    projection_deviation, range_basis, spectral_norm, svd_sorted, CMatrix, MatrixJson,
    Tolerance,
};
use crate::opsys::{make_operator_system, OperatorSystem};
use crate::par::{map_range, Exec};

/// Largest Kraus family built by products and the sign-averaging channel.
pub const KRAUS_LIMIT: usize = 4096;
const DELTA_LIMIT: usize = 12;
const TRACE_PRESERVATION_SLACK: f64 = 1e-8;

/// A channel `M_n -> M_k` given by Kraus operators `A_i in M_{k,n}` with
/// `sum A_i* A_i = I_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    n: usize,
    k: usize,
    kraus: Vec<CMatrix>,
}

impl QuantumChannel {
    pub fn new(n: usize, k: usize, kraus: Vec<CMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidChannel("no Kraus operators".into()));
        }
        for a in &kraus {
            if a.shape() != (k, n) {
                return Err(Error::ShapeMismatch {
                    expected: (k, n),
                    found: a.shape(),
                });
            }
            crate::numkernel::ensure_finite(a)?;
        }
        let ch = Self { n, k, kraus };
        let err = ch.trace_preservation_error();
        if err > TRACE_PRESERVATION_SLACK {
            return Err(Error::InvalidChannel(format!(
                "sum of A_i* A_i differs from the identity by {err:.3e}"
            )));
        }
        Ok(ch)
    }

    pub(crate) fn new_unchecked(n: usize, k: usize, kraus: Vec<CMatrix>) -> Self {
        Self { n, k, kraus }
    }

    /// Input dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Output dimension.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn kraus_count(&self) -> usize {
        self.kraus.len()
    }

    /// `max |sum A_i* A_i - I_n|` entrywise.
    pub fn trace_preservation_error(&self) -> f64 {
        let mut s = -identity(self.n);
        for a in &self.kraus {
            s += a.adjoint() * a;
        }
        max_abs(&s)
    }

    /// `X -> sum A_i X A_i*`.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.k, self.k);
        for a in &self.kraus {
            out += a * x * a.adjoint();
        }
        out
    }
}

/// Wire format: `{"n": int, "k": int, "kraus": [matrix, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelJson {
    pub n: usize,
    pub k: usize,
    pub kraus: Vec<MatrixJson>,
}

impl From<&QuantumChannel> for ChannelJson {
    fn from(ch: &QuantumChannel) -> Self {
        Self {
            n: ch.n,
            k: ch.k,
            kraus: ch.kraus.iter().map(MatrixJson::from_matrix).collect(),
        }
    }
}

impl ChannelJson {
    pub fn to_channel(&self) -> Result<QuantumChannel> {
        let kraus = self
            .kraus
            .iter()
            .map(MatrixJson::to_matrix)
            .collect::<Result<Vec<_>>>()?;
        QuantumChannel::new(self.n, self.k, kraus)
    }
}

/// `{I_n}`.
pub fn identity_channel(n: usize) -> QuantumChannel {
    QuantumChannel::new_unchecked(n, n, vec![identity(n)])
}

/// The trace `M_n -> C`, Kraus operators `e_i*`.
pub fn trace_channel(n: usize) -> QuantumChannel {
    let kraus = (0..n).map(|i| matrix_unit(1, n, 0, i)).collect();
    QuantumChannel::new_unchecked(n, 1, kraus)
}

/// An orthogonal basis of `span{A_i}`, scaled by the singular values so the
/// result is again a Kraus family of the same channel when the input is one.
pub(crate) fn reduced_kraus(kraus: &[CMatrix], tol: &Tolerance) -> Vec<CMatrix> {
    let (k, n) = kraus[0].shape();
    let mut stacked = CMatrix::zeros(k * n, kraus.len());
    for (j, a) in kraus.iter().enumerate() {
        stacked.column_mut(j).copy_from_slice(a.as_slice());
    }
    if kraus.len() <= k * n {
        // already small; only drop numerically zero operators
        let top = kraus.iter().map(frobenius).fold(0.0, f64::max);
        return kraus
            .iter()
            .filter(|a| frobenius(a) > tol.rank_rel * top)
            .cloned()
            .collect();
    }
    let (u, s, _) = svd_sorted(&stacked);
    let r = crate::numkernel::rank_of_values(&s, tol.rank_rel);
    (0..r)
        .map(|j| CMatrix::from_column_slice(k, n, u.column(j).as_slice()).scale(s[j]))
        .collect()
}

/// `S_Phi = span{A_i* A_j}`.
pub fn confusability_system(ch: &QuantumChannel, tol: &Tolerance) -> Result<OperatorSystem> {
    let err = ch.trace_preservation_error();
    if err > TRACE_PRESERVATION_SLACK {
        return Err(Error::InvalidChannel(format!(
            "sum of A_i* A_i differs from the identity by {err:.3e}"
        )));
    }
    let ops = reduced_kraus(&ch.kraus, tol);
    let mut products = Vec::with_capacity(ops.len() * ops.len());
    for a in &ops {
        let ad = a.adjoint();
        for b in &ops {
            products.push(&ad * b);
        }
    }
    make_operator_system(ch.n, &products, tol)
}

/// Kraus family `{sqrt(p(y|x)) E_yx : p(y|x) > 0}` of the classical channel
/// acting on diagonal matrices.
pub fn from_classical(nc: &ClassicalChannel) -> Result<QuantumChannel> {
    let (n, k) = (nc.inputs(), nc.outputs());
    let mut kraus = Vec::new();
    for y in 0..k {
        for x in 0..n {
            let p = nc.prob(y, x);
            if p > 0.0 {
                kraus.push(matrix_unit(k, n, y, x).scale(p.sqrt()));
            }
        }
    }
    QuantumChannel::new(n, k, kraus)
}

/// `X -> 2^-n sum_D A D X D A*` over diagonal sign matrices `D`, where the
/// columns of `A` are the normalised `x_i`.
pub fn delta_channel(x: &VectorTuple) -> Result<QuantumChannel> {
    let n = x.len();
    if n > DELTA_LIMIT {
        return Err(Error::TooManyKraus {
            count: 1usize << n.min(63),
            limit: KRAUS_LIMIT,
        });
    }
    let k = x.k();
    let a = CMatrix::from_fn(k, n, |r, col| {
        let v = x.get(col);
        v[r] / crate::graphs::norm(v)
    });
    let scale = (0.5f64).powf(n as f64 / 2.0);
    let kraus = (0..1usize << n)
        .map(|signs| {
            let mut ad = a.scale(scale);
            for col in 0..n {
                if signs >> col & 1 == 1 {
                    ad.column_mut(col).neg_mut();
                }
            }
            ad
        })
        .collect();
    QuantumChannel::new(n, k, kraus)
}

/// Traceless Hermitian matrices that, together with `I_n`, span `s` over C.
pub(crate) fn hermitian_generators(s: &OperatorSystem, tol: &Tolerance) -> Vec<CMatrix> {
    let n = s.n();
    let id_scale = 1.0 / n as f64;
    let mut cands = Vec::new();
    for b in s.basis() {
        let h1 = &b + b.adjoint();
        let h2 = (&b - b.adjoint()) * c(0.0, 1.0);
        for h in [h1, h2] {
            let t = crate::numkernel::trace(&h).re;
            cands.push(h - identity(n).scale(t * id_scale));
        }
    }
    // real coordinates: (Re vec, Im vec)
    let len = n * n;
    let real = DMatrix::<f64>::from_fn(2 * len, cands.len(), |r, j| {
        let z = cands[j].as_slice()[r % len];
        if r < len {
            z.re
        } else {
            z.im
        }
    });
    let (u, sigma, _) = crate::numkernel::real_svd(&real);
    let top = sigma.first().copied().unwrap_or(0.0);
    (0..sigma.len())
        .filter(|&i| top > 0.0 && sigma[i] > tol.rank_rel.max(1e-10) * top)
        .map(|i| {
            let col = u.column(i);
            let m = CMatrix::from_fn(n, n, |r, cc| {
                let idx = cc * n + r;
                c(col[idx], col[len + idx])
            });
            crate::numkernel::hermitian_part(&m)
        })
        .collect()
}

/// Smallest `m >= 1` with `m (m - 1) / 2 >= d - 1`.
pub fn realize_block_count(d: usize) -> usize {
    let mut m = 1;
    while m * (m - 1) / 2 < d.saturating_sub(1) {
        m += 1;
    }
    m
}

/// A channel `M_n -> M_{mn}` whose confusability system is `s`.
///
/// Traceless Hermitian generators `H_l` of `s` fill the strictly upper
/// blocks of an `m x m` block matrix `H` with identity diagonal blocks (and
/// `H_l` again below the diagonal). Then `X = (I + eps H) / (m (1 + eps))`
/// with `eps = 1 / (2 (1 + |H|))` is positive definite with diagonal blocks
/// `I_n / m`; the block columns of its Cholesky factor are the Kraus
/// operators. Dividing by `1 + eps` is what makes the map trace preserving.
pub fn realize(s: &OperatorSystem, tol: &Tolerance) -> Result<QuantumChannel> {
    let n = s.n();
    let gens = hermitian_generators(s, tol);
    let m = realize_block_count(gens.len() + 1);
    let mn = m * n;
    let mut h = CMatrix::zeros(mn, mn);
    for i in 0..m {
        h.view_mut((i * n, i * n), (n, n)).copy_from(&identity(n));
    }
    let mut slots = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j)));
    for g in &gens {
        let (i, j) = slots.next().expect("block count covers every generator");
        h.view_mut((i * n, j * n), (n, n)).copy_from(g);
        h.view_mut((j * n, i * n), (n, n)).copy_from(&g.adjoint());
    }
    let eps = 1.0 / (2.0 * (1.0 + spectral_norm(&h)));
    let x = (identity(mn) + h.scale(eps)).unscale(m as f64 * (1.0 + eps));
    let chol = x
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NumericalBreakdown("block matrix is not positive definite".into()))?;
    // X = L L*, so C = L* satisfies X = C* C
    let cfac = chol.l().adjoint();
    let kraus = (0..m).map(|j| cfac.columns(j * n, n).into_owned()).collect();
    QuantumChannel::new(n, mn, kraus)
}

/// `B_p = sum_q V_pq A_q` for an isometry `V` of shape `m' x m`.
pub fn remix(ch: &QuantumChannel, v: &CMatrix) -> Result<QuantumChannel> {
    let m = ch.kraus.len();
    if v.ncols() != m {
        return Err(Error::ShapeMismatch {
            expected: (v.nrows(), m),
            found: v.shape(),
        });
    }
    let dev = isometry_deviation(v);
    if dev > 1e-10 {
        return Err(Error::NotIsometry { deviation: dev });
    }
    let kraus = (0..v.nrows())
        .map(|p| {
            let mut b = CMatrix::zeros(ch.k, ch.n);
            for (q, a) in ch.kraus.iter().enumerate() {
                b += a * v[(p, q)];
            }
            b
        })
        .collect();
    Ok(QuantumChannel::new_unchecked(ch.n, ch.k, kraus))
}

/// Kraus operators `A_i (x) B_j`, ordered lexicographically in `(i, j)`.
pub fn tensor(a: &QuantumChannel, b: &QuantumChannel) -> Result<QuantumChannel> {
    tensor_with(a, b, Exec::default())
}

pub fn tensor_with(a: &QuantumChannel, b: &QuantumChannel, exec: Exec) -> Result<QuantumChannel> {
    let count = a.kraus.len() * b.kraus.len();
    if count > KRAUS_LIMIT {
        return Err(Error::TooManyKraus {
            count,
            limit: KRAUS_LIMIT,
        });
    }
    let mb = b.kraus.len();
    let kraus = map_range(exec, count, |idx| kron(&a.kraus[idx / mb], &b.kraus[idx % mb]));
    Ok(QuantumChannel::new_unchecked(a.n * b.n, a.k * b.k, kraus))
}

/// `Phi^{(x) r}` for `r >= 1`.
pub fn tensor_power(ch: &QuantumChannel, r: usize) -> Result<QuantumChannel> {
    if r == 0 {
        return Ok(identity_channel(1));
    }
    let count = (ch.kraus.len() as u128).saturating_pow(r as u32);
    if count > KRAUS_LIMIT as u128 {
        return Err(Error::TooManyKraus {
            count: count.min(usize::MAX as u128) as usize,
            limit: KRAUS_LIMIT,
        });
    }
    let mut out = ch.clone();
    for _ in 1..r {
        out = tensor(&out, ch)?;
    }
    Ok(out)
}

/// Orthogonal projections `P_1, ..., P_n` in `M_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionTuple {
    k: usize,
    projections: Vec<CMatrix>,
    ranks: Vec<usize>,
}

impl ProjectionTuple {
    pub fn new(k: usize, projections: Vec<CMatrix>, tol: &Tolerance) -> Result<Self> {
        let mut ranks = Vec::with_capacity(projections.len());
        for (i, p) in projections.iter().enumerate() {
            if p.shape() != (k, k) {
                return Err(Error::ShapeMismatch {
                    expected: (k, k),
                    found: p.shape(),
                });
            }
            let dev = projection_deviation(p);
            if dev > 1e-10 {
                return Err(Error::NotProjection { deviation: dev });
            }
            let r = numerical_rank(p, tol);
            if r == 0 || frobenius(p) < 1e-10 {
                return Err(Error::ZeroProjection { index: i });
            }
            ranks.push(r);
        }
        Ok(Self {
            k,
            projections,
            ranks,
        })
    }

    /// `P_i` = projection onto `span{x_i}`.
    pub fn from_vectors(x: &VectorTuple) -> Self {
        let projections: Vec<CMatrix> = x
            .vectors()
            .iter()
            .map(|v| {
                let col = CMatrix::from_column_slice(v.len(), 1, v);
                let nn = crate::graphs::norm(v).powi(2);
                (&col * col.adjoint()).unscale(nn)
            })
            .collect();
        let ranks = vec![1; projections.len()];
        Self {
            k: x.k(),
            projections,
            ranks,
        }
    }

    /// Commuting diagonal projections onto the coordinates in each set.
    pub fn diagonal_from_sets(k: usize, family: &[Vec<usize>]) -> Result<Self> {
        let projections = family
            .iter()
            .enumerate()
            .map(|(i, set)| {
                if set.is_empty() {
                    return Err(Error::EmptySet { index: i });
                }
                let mut p = CMatrix::zeros(k, k);
                for &t in set {
                    if t >= k {
                        return Err(Error::InvalidInput(format!("token {t} out of range {k}")));
                    }
                    p[(t, t)] = c(1.0, 0.0);
                }
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, projections, &Tolerance::default())
    }

    /// Projection onto the range of each matrix.
    pub fn from_ranges(k: usize, ranges: &[CMatrix], tol: &Tolerance) -> Result<Self> {
        let projections = ranges
            .iter()
            .map(|x| {
                let b = range_basis(x, tol);
                &b * b.adjoint()
            })
            .collect();
        Self::new(k, projections, tol)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    pub fn get(&self, i: usize) -> &CMatrix {
        &self.projections[i]
    }

    pub fn projections(&self) -> &[CMatrix] {
        &self.projections
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{confusability_graph, non_orthogonality_graph, Graph};
    use crate::opsys::{full_system, graph_system, scalar_system, sk_system, tensor as otensor};
    use crate::random::{random_channel, random_operator_system, random_unitary, rng_from_seed};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    pub(crate) fn prop_iv9_channel() -> QuantumChannel {
        let s = 0.5f64.sqrt();
        let a1 = crate::numkernel::from_real(3, 2, &[s, 0.0, 0.0, 0.0, 0.0, s]);
        let a2 = crate::numkernel::from_real(3, 2, &[0.0, 0.0, 0.0, s, s, 0.0]);
        QuantumChannel::new(2, 3, vec![a1, a2]).unwrap()
    }

    #[test]
    fn basic_confusability_systems() {
        let id = confusability_system(&identity_channel(3), &tol()).unwrap();
        assert!(id.equals(&scalar_system(3), &tol()).unwrap());
        let tr = confusability_system(&trace_channel(3), &tol()).unwrap();
        assert!(tr.equals(&full_system(3), &tol()).unwrap());
        let s = confusability_system(&prop_iv9_channel(), &tol()).unwrap();
        assert_eq!(s.dim(), 3);
        assert!(s.max_principal_angle(&sk_system(2)).unwrap() < 1e-12);
    }

    #[test]
    fn invalid_channels_rejected() {
        assert!(matches!(
            QuantumChannel::new(2, 2, vec![identity(2).scale(2.0)]),
            Err(Error::InvalidChannel(_))
        ));
        assert!(QuantumChannel::new(2, 2, vec![]).is_err());
        assert!(confusability_system(
            &QuantumChannel::new_unchecked(2, 2, vec![identity(2).scale(0.5)]),
            &tol()
        )
        .is_err());
    }

    #[test]
    fn classical_channels() {
        let nq = from_classical(&ClassicalChannel::identity(3)).unwrap();
        assert!(confusability_system(&nq, &tol())
            .unwrap()
            .equals(&graph_system(&Graph::empty(3)), &tol())
            .unwrap());
        let single = ClassicalChannel::new(3, 1, vec![vec![1.0; 3]]).unwrap();
        let nq = from_classical(&single).unwrap();
        assert!(confusability_system(&nq, &tol())
            .unwrap()
            .equals(&full_system(3), &tol())
            .unwrap());
        let mut rng = rng_from_seed(11);
        let nc = crate::random::random_classical_channel(5, 4, 0.4, &mut rng);
        let nq = from_classical(&nc).unwrap();
        assert!(confusability_system(&nq, &tol())
            .unwrap()
            .equals(&graph_system(&confusability_graph(&nc)), &tol())
            .unwrap());
    }

    #[test]
    fn delta_channels() {
        let basis = VectorTuple::standard(4, &[0, 1, 2, 3]);
        let d = delta_channel(&basis).unwrap();
        assert!(d.trace_preservation_error() < 1e-12);
        assert!(confusability_system(&d, &tol())
            .unwrap()
            .equals(&graph_system(&Graph::empty(4)), &tol())
            .unwrap());
        let one = VectorTuple::new(3, vec![vec![c(1.0, 0.0), c(2.0, 1.0), c(0.0, 0.0)]]).unwrap();
        assert_eq!(confusability_system(&delta_channel(&one).unwrap(), &tol()).unwrap().dim(), 1);
        let mut rng = rng_from_seed(5);
        let x = crate::random::random_vector_tuple(3, 4, 0.4, &mut rng);
        let d = delta_channel(&x).unwrap();
        assert!(confusability_system(&d, &tol())
            .unwrap()
            .equals(&graph_system(&non_orthogonality_graph(&x)), &tol())
            .unwrap());
        let big = VectorTuple::standard(13, &(0..13).collect::<Vec<_>>());
        assert!(matches!(delta_channel(&big), Err(Error::TooManyKraus { .. })));
    }

    #[test]
    fn realize_examples() {
        let ch = realize(&scalar_system(3), &tol()).unwrap();
        assert_eq!(ch.kraus_count(), 1);
        assert_eq!(ch.k(), 3);
        assert!(confusability_system(&ch, &tol())
            .unwrap()
            .equals(&scalar_system(3), &tol())
            .unwrap());
        let ch = realize(&full_system(2), &tol()).unwrap();
        assert_eq!(ch.k(), 6);
        assert!(confusability_system(&ch, &tol())
            .unwrap()
            .equals(&full_system(2), &tol())
            .unwrap());
        let mut rng = rng_from_seed(2);
        for _ in 0..5 {
            let s = random_operator_system(3, 2, &mut rng).unwrap();
            let ch = realize(&s, &tol()).unwrap();
            assert!(ch.k() <= 18);
            assert_eq!(ch.k(), realize_block_count(s.dim()) * 3);
            let back = confusability_system(&ch, &tol()).unwrap();
            assert!(back.max_principal_angle(&s).unwrap() < 1e-7);
        }
    }

    #[test]
    fn remix_keeps_system() {
        let ch = prop_iv9_channel();
        let same = remix(&ch, &identity(2)).unwrap();
        assert_eq!(same, ch);
        let mut rng = rng_from_seed(9);
        let v = random_unitary(2, &mut rng);
        let r = remix(&ch, &v).unwrap();
        assert!(r.trace_preservation_error() < 1e-12);
        assert!(confusability_system(&r, &tol())
            .unwrap()
            .equals(&sk_system(2), &tol())
            .unwrap());
        assert!(matches!(
            remix(&ch, &identity(2).scale(2.0)),
            Err(Error::NotIsometry { .. })
        ));
        let rc = random_channel(3, 2, 3, &mut rng);
        assert!(rc.trace_preservation_error() < 1e-12);
    }

    #[test]
    fn tensor_channels() {
        let t = tensor(&identity_channel(2), &identity_channel(2)).unwrap();
        assert_eq!(t, identity_channel(4));
        let ch = prop_iv9_channel();
        let sq = tensor_power(&ch, 2).unwrap();
        let s = confusability_system(&sq, &tol()).unwrap();
        assert!(s.equals(&otensor(&sk_system(2), &sk_system(2)), &tol()).unwrap());
        assert!(matches!(
            tensor_power(&ch, 13),
            Err(Error::TooManyKraus { .. })
        ));
    }

    #[test]
    fn projection_tuples() {
        let p = ProjectionTuple::diagonal_from_sets(3, &[vec![0, 1], vec![1], vec![2]]).unwrap();
        assert_eq!(p.ranks(), &[2, 1, 1]);
        assert_eq!(
            crate::graphs::non_orthogonality_graph_proj(&p),
            Graph::from_edges(3, &[(0, 1)]).unwrap()
        );
        assert!(matches!(
            ProjectionTuple::new(2, vec![CMatrix::zeros(2, 2)], &tol()),
            Err(Error::ZeroProjection { index: 0 })
        ));
        assert!(matches!(
            ProjectionTuple::new(2, vec![identity(2).scale(0.5)], &tol()),
            Err(Error::NotProjection { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let ch = prop_iv9_channel();
        let text = serde_json::to_string(&ChannelJson::from(&ch)).unwrap();
        let back: ChannelJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_channel().unwrap(), ch);
    }
}
