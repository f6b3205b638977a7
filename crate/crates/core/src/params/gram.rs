use rand::Rng;
use serde::{Deserialize, Serialize};

use super::verify::MEMBERSHIP_SLACK;
use super::{Direction, ParamCertificate, Parameter, Witness};
use crate::channels::{ProjectionTuple, QuantumChannel};
use crate::error::{Error, Result};
use crate::graphs::{intersection_number, non_orthogonality_graph_proj, Graph};
use crate::numkernel::{
    identity, is_psd, max_abs, numerical_rank, orthonormalize, pd_inv_sqrt, psd_factor,
    range_basis, spectral_norm, CMatrix, MatrixJson, Tolerance,
};
use crate::opsys::OperatorSystem;
use crate::random::random_isometry;

/// A positive semidefinite matrix partitioned into blocks `B_ij` of sizes
/// `t_i x t_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramBlockMatrix {
    blocks: Vec<usize>,
    data: CMatrix,
}

impl GramBlockMatrix {
    pub fn new(blocks: Vec<usize>, data: CMatrix, tol: &Tolerance) -> Result<Self> {
        let total: usize = blocks.iter().sum();
        if data.shape() != (total, total) {
            return Err(Error::BlockSizeMismatch(format!(
                "blocks {blocks:?} need a {total}x{total} matrix, found {:?}",
                data.shape()
            )));
        }
        if blocks.contains(&0) {
            return Err(Error::BlockSizeMismatch("block sizes must be positive".into()));
        }
        let report = is_psd(&data, tol)?;
        if !report.is_psd {
            return Err(Error::NotPsd {
                min_eigenvalue: report.min_eigenvalue,
            });
        }
        Ok(Self { blocks, data })
    }

    /// `m` blocks of uniform size `n`.
    pub fn uniform(n: usize, data: CMatrix, tol: &Tolerance) -> Result<Self> {
        if n == 0 || data.nrows() % n != 0 {
            return Err(Error::BlockSizeMismatch(format!(
                "{} rows do not split into blocks of size {n}",
                data.nrows()
            )));
        }
        Self::new(vec![n; data.nrows() / n], data, tol)
    }

    pub(crate) fn new_unchecked(blocks: Vec<usize>, data: CMatrix) -> Self {
        Self { blocks, data }
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn offset(&self, i: usize) -> usize {
        self.blocks[..i].iter().sum()
    }

    pub fn block(&self, i: usize, j: usize) -> CMatrix {
        self.data
            .view((self.offset(i), self.offset(j)), (self.blocks[i], self.blocks[j]))
            .into_owned()
    }

    pub fn rank(&self, tol: &Tolerance) -> usize {
        numerical_rank(&self.data, tol)
    }
}

/// Wire format: `{"blocks": [t_1, ...], "data": matrix}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramBlockMatrixJson {
    pub blocks: Vec<usize>,
    pub data: MatrixJson,
}

impl From<&GramBlockMatrix> for GramBlockMatrixJson {
    fn from(g: &GramBlockMatrix) -> Self {
        Self {
            blocks: g.blocks.clone(),
            data: MatrixJson::from_matrix(&g.data),
        }
    }
}

impl GramBlockMatrixJson {
    pub fn to_gram(&self) -> Result<GramBlockMatrix> {
        GramBlockMatrix::new(self.blocks.clone(), self.data.to_matrix()?, &Tolerance::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaMode {
    /// Every block lies in `S`: bounds the subcomplexity.
    Beta,
    /// The blocks span `S`: bounds the complexity.
    Gamma,
}

/// Check a uniform block matrix `B = [B_ij]` with `B_ij in M_n`: `B` is
/// positive, `sum_i B_ii = I_n`, and the blocks lie in (beta) or span
/// (gamma) `S`. A pass bounds the parameter by `rank B`.
pub fn verify_eta_certificate(
    s: &OperatorSystem,
    b: &GramBlockMatrix,
    mode: EtaMode,
    tol: &Tolerance,
) -> Result<ParamCertificate> {
    let n = s.n();
    if b.blocks.iter().any(|&t| t != n) {
        return Err(Error::BlockSizeMismatch(format!(
            "expected blocks of size {n}, found {:?}",
            b.blocks
        )));
    }
    let m = b.n_blocks();
    let mut diag_sum = -identity(n);
    for i in 0..m {
        diag_sum += b.block(i, i);
    }
    let sum_residual = max_abs(&diag_sum);
    let psd = is_psd(&b.data, tol)?.is_psd;
    let (member_ok, member_residual) = match mode {
        EtaMode::Beta => {
            let mut worst: f64 = 0.0;
            for i in 0..m {
                for j in 0..m {
                    let blk = b.block(i, j);
                    worst = worst.max(s.residual(&blk)? / (1.0 + crate::numkernel::frobenius(&blk)));
                }
            }
            (worst < MEMBERSHIP_SLACK, worst)
        }
        EtaMode::Gamma => {
            let blocks: Vec<CMatrix> = (0..m)
                .flat_map(|i| (0..m).map(move |j| (i, j)))
                .map(|(i, j)| b.block(i, j))
                .collect();
            let span = orthonormalize(&blocks, tol)?;
            let angle = span.max_principal_angle(s.space())?;
            (span.same_as(s.space(), tol)?, angle)
        }
    };
    let parameter = match mode {
        EtaMode::Beta => Parameter::Beta,
        EtaMode::Gamma => Parameter::Gamma,
    };
    Ok(ParamCertificate::new(
        parameter,
        Direction::Upper,
        b.rank(tol),
        Witness::Gram(b.clone()),
        psd && sum_residual < MEMBERSHIP_SLACK && member_ok,
        sum_residual.max(member_residual),
    ))
}

/// Factor `B = X* X` and slice `X` into block columns: the Kraus operators of
/// a channel `M_n -> M_{rank B}` whose products `A_i* A_j` are the blocks.
pub fn gram_to_channel(b: &GramBlockMatrix, tol: &Tolerance) -> Result<QuantumChannel> {
    let n = b.blocks[0];
    if b.blocks.iter().any(|&t| t != n) {
        return Err(Error::BlockSizeMismatch("blocks must have equal size".into()));
    }
    let x = psd_factor(&b.data, tol);
    let r = x.nrows();
    let kraus = (0..b.n_blocks())
        .map(|j| x.columns(j * n, n).into_owned())
        .collect();
    QuantumChannel::new(n, r, kraus)
}

fn zero_threshold(b: &CMatrix) -> f64 {
    1e-7 * spectral_norm(b)
}

/// Membership in `F_t^+(G)`: positive, `B_ij != 0` exactly on edges, and
/// `rank B_ii = t_i`. Zero decisions use `1e-7 |B|`.
pub fn check_f_membership(b: &GramBlockMatrix, g: &Graph, tol: &Tolerance) -> Result<()> {
    if b.n_blocks() != g.n() {
        return Err(Error::NotInF(format!(
            "{} blocks for a graph on {} vertices",
            b.n_blocks(),
            g.n()
        )));
    }
    let report = is_psd(&b.data, tol)?;
    if !report.is_psd {
        return Err(Error::NotInF(format!(
            "not positive: minimum eigenvalue {:.3e}",
            report.min_eigenvalue
        )));
    }
    let thr = zero_threshold(&b.data);
    for i in 0..g.n() {
        for j in i + 1..g.n() {
            let nonzero = max_abs(&b.block(i, j)) > thr;
            if nonzero != g.has_edge(i, j) {
                return Err(Error::NotInF(format!(
                    "block ({i}, {j}) is {} but the pair is {}adjacent",
                    if nonzero { "non-zero" } else { "zero" },
                    if g.has_edge(i, j) { "" } else { "not " }
                )));
            }
        }
        let r = numerical_rank(&b.block(i, i), tol);
        if r != b.blocks[i] {
            return Err(Error::NotInF(format!(
                "diagonal block {i} has rank {r}, expected {}",
                b.blocks[i]
            )));
        }
    }
    Ok(())
}

/// Membership in `H_t^+(G)`: `F_t^+(G)` with identity diagonal blocks.
pub fn check_h_membership(b: &GramBlockMatrix, g: &Graph, tol: &Tolerance) -> Result<()> {
    check_f_membership(b, g, tol).map_err(|e| match e {
        Error::NotInF(msg) => Error::NotInH(msg),
        other => other,
    })?;
    for i in 0..g.n() {
        let dev = max_abs(&(b.block(i, i) - identity(b.blocks[i])));
        if dev > MEMBERSHIP_SLACK {
            return Err(Error::NotInH(format!(
                "diagonal block {i} differs from the identity by {dev:.3e}"
            )));
        }
    }
    Ok(())
}

/// Projections onto the ranges of the block columns of a factor `B = X* X`.
/// The result lives in `M_k`, `k = rank B`, and has non-orthogonality graph `G`.
pub fn gram_to_projections(
    b: &GramBlockMatrix,
    g: &Graph,
    tol: &Tolerance,
) -> Result<ProjectionTuple> {
    check_f_membership(b, g, tol)?;
    let x = psd_factor(&b.data, tol);
    let k = x.nrows();
    let ranges: Vec<CMatrix> = (0..b.n_blocks())
        .map(|i| x.columns(b.offset(i), b.blocks[i]).into_owned())
        .collect();
    let p = ProjectionTuple::from_ranges(k, &ranges, tol)?;
    if non_orthogonality_graph_proj(&p) != *g {
        return Err(Error::NotInF(
            "extracted projections do not reproduce the graph".into(),
        ));
    }
    Ok(p)
}

/// `B = X* X` where the columns of `X_i` are an orthonormal basis of `range P_i`.
pub fn gram_from_projections(p: &ProjectionTuple, tol: &Tolerance) -> GramBlockMatrix {
    let bases: Vec<CMatrix> = p.projections().iter().map(|pi| range_basis(pi, tol)).collect();
    let blocks: Vec<usize> = bases.iter().map(|b| b.ncols()).collect();
    let total: usize = blocks.iter().sum();
    let mut x = CMatrix::zeros(p.k(), total);
    let mut off = 0;
    for b in &bases {
        x.columns_mut(off, b.ncols()).copy_from(b);
        off += b.ncols();
    }
    GramBlockMatrix::new_unchecked(blocks, x.adjoint() * &x)
}

/// `D B D` with `D = (+)_i B_ii^{-1/2}`, which maps `F_t^+(G)` onto `H_t^+(G)`.
pub fn normalize_to_h(b: &GramBlockMatrix, g: &Graph, tol: &Tolerance) -> Result<GramBlockMatrix> {
    check_f_membership(b, g, tol)?;
    let total = b.data.nrows();
    let mut d = CMatrix::zeros(total, total);
    for i in 0..b.n_blocks() {
        let inv = pd_inv_sqrt(&b.block(i, i))?;
        d.view_mut((b.offset(i), b.offset(i)), (b.blocks[i], b.blocks[i]))
            .copy_from(&inv);
    }
    let out = &d * &b.data * &d;
    Ok(GramBlockMatrix::new_unchecked(
        b.blocks.clone(),
        crate::numkernel::hermitian_part(&out),
    ))
}

/// A random element of `H_t^+(G)`: each vertex gets a random `t_i`-dimensional
/// subspace of the coordinates owned by its intersection-witness tokens, each
/// token owning `max t` coordinates. Vertices sharing a token overlap
/// generically; the others are exactly orthogonal.
pub fn random_h_instance<R: Rng + ?Sized>(
    g: &Graph,
    t: &[usize],
    rng: &mut R,
) -> Result<GramBlockMatrix> {
    if t.len() != g.n() || t.contains(&0) {
        return Err(Error::BlockSizeMismatch(format!(
            "rank vector {t:?} does not fit {} vertices",
            g.n()
        )));
    }
    let w = intersection_number(g)?;
    let width = t.iter().copied().max().unwrap_or(1);
    let k = w.m * width;
    let total: usize = t.iter().sum();
    let mut x = CMatrix::zeros(k, total);
    let mut off = 0;
    for (i, tokens) in w.family.iter().enumerate() {
        let coords: Vec<usize> = tokens
            .iter()
            .flat_map(|&r| r * width..(r + 1) * width)
            .collect();
        let v = random_isometry(coords.len(), t[i], rng);
        for (row, &cidx) in coords.iter().enumerate() {
            for col in 0..t[i] {
                x[(cidx, off + col)] = v[(row, col)];
            }
        }
        off += t[i];
    }
    Ok(GramBlockMatrix::new_unchecked(t.to_vec(), x.adjoint() * &x))
}

/// One step of the rank reduction for block `i`: from `B in H_t^+(G)` build
/// an element of `F_s^+(G)`, `s = t - e_i`, of no larger rank.
///
/// With `B = X* X`, drop the first column `x0` of block `i` to get `Y`, let `Z`
/// repeat `x0` in the remaining columns of block `i`, and return
/// `W* W` for `W = Y + eps Z`. `eps` starts at `a / (4 b)` where `a` is the
/// smallest non-zero `|X* Y_i|` entry and `b` the largest `|X* x0|` entry, and
/// is halved (at most 60 times) until the block pattern and ranks are right.
pub fn rank_reduction_step(
    b: &GramBlockMatrix,
    g: &Graph,
    i: usize,
    tol: &Tolerance,
) -> Result<GramBlockMatrix> {
    check_h_membership(b, g, tol)?;
    let ti = b.blocks[i];
    if ti < 2 {
        return Err(Error::InvalidInput(format!(
            "block {i} has size {ti}; reduction needs at least 2"
        )));
    }
    let x = psd_factor(&b.data, tol);
    let (r, total) = x.shape();
    let off = b.offset(i);
    let x0 = x.column(off).into_owned();
    let mut y = CMatrix::zeros(r, total - 1);
    let mut col = 0;
    for j in 0..total {
        if j != off {
            y.column_mut(col).copy_from(&x.column(j));
            col += 1;
        }
    }
    let mut z = CMatrix::zeros(r, total - 1);
    for j in off..off + ti - 1 {
        z.column_mut(j).copy_from(&x0);
    }
    let yi = y.columns(off, ti - 1).into_owned();
    let thr = zero_threshold(&b.data);
    let a = (x.adjoint() * &yi)
        .iter()
        .map(|w| w.norm())
        .filter(|&v| v > thr)
        .fold(f64::INFINITY, f64::min);
    if !a.is_finite() {
        return Err(Error::DegenerateABounds(
            "every entry of X* Y_i is zero".into(),
        ));
    }
    let bmax = (x.adjoint() * &x0).iter().map(|w| w.norm()).fold(0.0, f64::max);
    if bmax <= 0.0 {
        return Err(Error::DegenerateABounds("X* x0 vanishes".into()));
    }
    let mut blocks = b.blocks.clone();
    blocks[i] -= 1;
    let mut eps = a / (4.0 * bmax);
    for _ in 0..=60 {
        let w = &y + z.scale(eps);
        let cand = GramBlockMatrix::new_unchecked(
            blocks.clone(),
            crate::numkernel::hermitian_part(&(w.adjoint() * &w)),
        );
        if check_f_membership(&cand, g, tol).is_ok() {
            return Ok(cand);
        }
        eps *= 0.5;
    }
    Err(Error::NumericalBreakdown(
        "no perturbation size kept the block pattern".into(),
    ))
}
