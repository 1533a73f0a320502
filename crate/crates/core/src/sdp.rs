//! Small dense semidefinite programming solver.
//!
//! Problems are in block standard form
//!
//! ```text
//!   min / max  ⟨C, X⟩ + offset
//!   s.t.       ⟨A_i, X⟩ = b_i,   i = 1..m
//!              X ⪰ 0 blockwise
//! ```
//!
//! where a `1 x 1` block is a nonnegative scalar. The solver is an
//! infeasible-start primal-dual path-following method with the HKM search
//! direction, a fixed centering parameter and a fraction-to-boundary rule.
//! Internally everything is converted to the minimisation form with dual
//!
//! ```text
//!   max  bᵀy   s.t.  Σ y_i A_i + S = C,   S ⪰ 0.
//! ```

use std::fmt::Write as _;

use log::{debug, warn};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{sym_eig, Cholesky, Dense, SymMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SdpError {
    #[error("block {block}: expected dimension {expected}, got {got}")]
    BlockDim { block: usize, expected: usize, got: usize },
    #[error("{what} has {got} blocks, problem has {expected}")]
    BlockCount { what: String, expected: usize, got: usize },
    #[error("non-finite data in {0}")]
    NonFinite(String),
    #[error("dual vector has length {got}, problem has {expected} constraints")]
    DualLength { expected: usize, got: usize },
    #[error("debug format, line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Block-diagonal symmetric matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockMatrix {
    blocks: Vec<SymMatrix>,
}

impl BlockMatrix {
    pub fn zeros(dims: &[usize]) -> Self {
        BlockMatrix { blocks: dims.iter().map(|&d| SymMatrix::zeros(d)).collect() }
    }

    pub fn identity(dims: &[usize]) -> Self {
        BlockMatrix { blocks: dims.iter().map(|&d| SymMatrix::identity(d)).collect() }
    }

    pub fn from_blocks(blocks: Vec<SymMatrix>) -> Self {
        BlockMatrix { blocks }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(SymMatrix::dim).collect()
    }

    pub fn blocks(&self) -> &[SymMatrix] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &SymMatrix {
        &self.blocks[k]
    }

    pub fn block_mut(&mut self, k: usize) -> &mut SymMatrix {
        &mut self.blocks[k]
    }

    /// Sets a single entry (and its mirror) of block `k`.
    pub fn set(&mut self, k: usize, i: usize, j: usize, v: f64) {
        self.blocks[k].set(i, j, v);
    }

    pub fn inner(&self, other: &BlockMatrix) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y).sum::<f64>())
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    pub fn scale(&self, k: f64) -> BlockMatrix {
        BlockMatrix { blocks: self.blocks.iter().map(|b| b.scale(k)).collect() }
    }

    pub fn axpy(&mut self, k: f64, other: &BlockMatrix) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            a.axpy(k, b);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.blocks.iter().all(SymMatrix::is_finite)
    }

    /// Smallest eigenvalue over all blocks.
    pub fn lambda_min(&self) -> f64 {
        self.blocks
            .iter()
            .filter(|b| b.dim() > 0)
            .map(|b| if b.dim() == 1 { b.get(0, 0) } else { sym_eig(b).map(|s| s.lambda_min()).unwrap_or(f64::NAN) })
            .fold(f64::INFINITY, f64::min)
    }

    fn nonzero_blocks(&self) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&k| self.blocks[k].as_slice().iter().any(|&v| v != 0.0)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub a: BlockMatrix,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpProblem {
    pub block_dims: Vec<usize>,
    pub c: BlockMatrix,
    pub constraints: Vec<Constraint>,
    pub sense: Sense,
    /// Constant added to the reported objective.
    pub offset: f64,
}

impl SdpProblem {
    /// Problem with zero objective and no constraints.
    pub fn new(block_dims: Vec<usize>, sense: Sense) -> Self {
        let c = BlockMatrix::zeros(&block_dims);
        SdpProblem { block_dims, c, constraints: Vec::new(), sense, offset: 0.0 }
    }

    pub fn zero_block(&self) -> BlockMatrix {
        BlockMatrix::zeros(&self.block_dims)
    }

    pub fn add_constraint(&mut self, a: BlockMatrix, b: f64) {
        self.constraints.push(Constraint { a, b });
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Sum of block dimensions (the barrier parameter's denominator).
    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    fn check_conforming(&self, m: &BlockMatrix, what: &str) -> Result<(), SdpError> {
        if m.blocks.len() != self.block_dims.len() {
            return Err(SdpError::BlockCount { what: what.to_string(), expected: self.block_dims.len(), got: m.blocks.len() });
        }
        for (k, (b, &d)) in m.blocks.iter().zip(&self.block_dims).enumerate() {
            if b.dim() != d {
                return Err(SdpError::BlockDim { block: k, expected: d, got: b.dim() });
            }
        }
        if !m.is_finite() {
            return Err(SdpError::NonFinite(what.to_string()));
        }
        Ok(())
    }

    /// Checks block conformity and finiteness. Linear dependence among the
    /// constraints is not an error; `solve` drops dependent rows.
    pub fn validate(&self) -> Result<(), SdpError> {
        self.check_conforming(&self.c, "objective")?;
        for (i, con) in self.constraints.iter().enumerate() {
            self.check_conforming(&con.a, &format!("constraint {}", i))?;
            if !con.b.is_finite() {
                return Err(SdpError::NonFinite(format!("right-hand side {}", i)));
            }
        }
        if !self.offset.is_finite() {
            return Err(SdpError::NonFinite("offset".into()));
        }
        Ok(())
    }

    /// `⟨C, X⟩ + offset`.
    pub fn objective(&self, x: &BlockMatrix) -> f64 {
        self.c.inner(x) + self.offset
    }

    /// Writes the problem in SDPA sparse format, maximisation convention
    /// (as read by CSDP): a minimisation problem is written with `-C`.
    /// Header comment lines starting with `*` carry the sense, the offset
    /// and any caller-supplied notes.
    pub fn write_debug(&self, notes: &[String]) -> String {
        let mut out = String::new();
        for note in notes {
            for line in note.lines() {
                let _ = writeln!(out, "* {}", line);
            }
        }
        let sense = match self.sense {
            Sense::Minimize => "minimize",
            Sense::Maximize => "maximize",
        };
        let _ = writeln!(out, "* sense: {}", sense);
        let _ = writeln!(out, "* offset: {:e}", self.offset);
        let _ = writeln!(out, "{}", self.constraints.len());
        let _ = writeln!(out, "{}", self.block_dims.len());
        let dims: Vec<String> = self.block_dims.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "{}", dims.join(" "));
        let bs: Vec<String> = self.constraints.iter().map(|c| format!("{:e}", c.b)).collect();
        let _ = writeln!(out, "{}", bs.join(" "));
        let sign = if self.sense == Sense::Minimize { -1.0 } else { 1.0 };
        let mut emit = |matno: usize, m: &BlockMatrix, k: f64| {
            for (blk, b) in m.blocks.iter().enumerate() {
                for i in 0..b.dim() {
                    for j in i..b.dim() {
                        let v = b.get(i, j);
                        if v != 0.0 {
                            let _ = writeln!(out, "{} {} {} {} {:e}", matno, blk + 1, i + 1, j + 1, k * v);
                        }
                    }
                }
            }
        };
        emit(0, &self.c, sign);
        for (i, con) in self.constraints.iter().enumerate() {
            emit(i + 1, &con.a, 1.0);
        }
        out
    }

    /// Reads the format produced by [`SdpProblem::write_debug`]. Files
    /// without a `* sense:` line are taken as maximisation problems.
    pub fn read_debug(text: &str) -> Result<SdpProblem, SdpError> {
        let perr = |line: usize, msg: &str| SdpError::Parse { line, msg: msg.to_string() };
        let mut sense = Sense::Maximize;
        let mut offset = 0.0;
        let mut body = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('*').or_else(|| line.strip_prefix('"')) {
                let comment = comment.trim();
                if let Some(s) = comment.strip_prefix("sense:") {
                    sense = match s.trim() {
                        "minimize" => Sense::Minimize,
                        "maximize" => Sense::Maximize,
                        other => return Err(perr(no + 1, &format!("unknown sense {:?}", other))),
                    };
                } else if let Some(o) = comment.strip_prefix("offset:") {
                    offset = o.trim().parse().map_err(|_| perr(no + 1, "bad offset"))?;
                }
                continue;
            }
            if !line.is_empty() {
                body.push((no + 1, line));
            }
        }
        let mut it = body.into_iter();
        let mut next = |what: &str| it.next().ok_or_else(|| perr(text.lines().count(), &format!("missing {}", what)));
        let (l, s) = next("constraint count")?;
        let m: usize = s.parse().map_err(|_| perr(l, "bad constraint count"))?;
        let (l, s) = next("block count")?;
        let nb: usize = s.parse().map_err(|_| perr(l, "bad block count"))?;
        let (l, s) = next("block structure")?;
        let dims: Vec<usize> = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i64>().map(|d| d.unsigned_abs() as usize))
            .collect::<Result<_, _>>()
            .map_err(|_| perr(l, "bad block structure"))?;
        if dims.len() != nb {
            return Err(perr(l, "block structure length differs from block count"));
        }
        let (l, s) = next("right-hand side")?;
        let b: Vec<f64> = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| perr(l, "bad right-hand side"))?;
        if b.len() != m {
            return Err(perr(l, "right-hand side length differs from constraint count"));
        }
        let mut c = BlockMatrix::zeros(&dims);
        let mut a: Vec<BlockMatrix> = (0..m).map(|_| BlockMatrix::zeros(&dims)).collect();
        for (l, s) in it {
            let f: Vec<&str> = s.split_whitespace().collect();
            if f.len() != 5 {
                return Err(perr(l, "expected `matno block i j value`"));
            }
            let idx = |t: &str| t.parse::<usize>().map_err(|_| perr(l, "bad index"));
            let (matno, blk, i, j) = (idx(f[0])?, idx(f[1])?, idx(f[2])?, idx(f[3])?);
            let v: f64 = f[4].parse().map_err(|_| perr(l, "bad value"))?;
            if matno > m || blk == 0 || blk > nb || i == 0 || j == 0 || i > dims[blk - 1] || j > dims[blk - 1] {
                return Err(perr(l, "index out of range"));
            }
            let target = if matno == 0 { &mut c } else { &mut a[matno - 1] };
            target.set(blk - 1, i - 1, j - 1, v);
        }
        if sense == Sense::Minimize {
            c = c.scale(-1.0);
        }
        let constraints = a.into_iter().zip(b).map(|(a, b)| Constraint { a, b }).collect();
        Ok(SdpProblem { block_dims: dims, c, constraints, sense, offset })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub max_iters: usize,
    /// Centering parameter σ.
    pub sigma: f64,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: f64,
    /// Stop when primal and dual residuals are below this.
    pub feas_tol: f64,
    /// Stop when `⟨X, S⟩ <= gap_tol · max(1, |objective|)`.
    pub gap_tol: f64,
    /// Objective magnitude beyond which the problem is declared suspect.
    pub divergence_limit: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iters: 200,
            sigma: 0.25,
            step_fraction: 0.98,
            feas_tol: 1e-10,
            gap_tol: 1e-9,
            divergence_limit: 1e8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    MaxIters,
    NumericalFailure,
    /// The objective diverged past `divergence_limit`; the problem is
    /// probably infeasible or unbounded.
    InfeasibleSuspected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KktResiduals {
    /// `max_i |⟨A_i, X⟩ − b_i|`.
    pub primal_infeas: f64,
    /// Frobenius norm of the dual equation residual.
    pub dual_infeas: f64,
    /// `⟨X, S⟩`.
    pub gap: f64,
}

/// One interior-point iterate, reported in the caller's sense.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub gap: f64,
    pub primal_infeas: f64,
    pub dual_infeas: f64,
    /// `⟨R_d, X⟩ − yᵀr_p` in minimisation form: the amount by which
    /// infeasibility can make the objective difference differ from `gap`.
    pub infeasibility_term: f64,
    pub step_primal: f64,
    pub step_dual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SdpSolution {
    pub x: BlockMatrix,
    pub y: Vec<f64>,
    pub s: BlockMatrix,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub residuals: KktResiduals,
    pub status: SolveStatus,
    pub iterations: usize,
    pub history: Vec<IterationRecord>,
    /// Indices of constraints dropped as linearly dependent.
    pub dropped: Vec<usize>,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Residuals of `(X, y, S)` against the original problem data.
///
/// For a minimisation problem the dual equation is `Σ y_i A_i + S = C`;
/// for maximisation it is `Σ y_i A_i − S = C`.
pub fn kkt_residuals(p: &SdpProblem, s: &SdpSolution) -> Result<KktResiduals, SdpError> {
    p.check_conforming(&s.x, "X")?;
    p.check_conforming(&s.s, "S")?;
    if s.y.len() != p.constraints.len() {
        return Err(SdpError::DualLength { expected: p.constraints.len(), got: s.y.len() });
    }
    let primal_infeas = p
        .constraints
        .iter()
        .map(|c| (c.a.inner(&s.x) - c.b).abs())
        .fold(0.0, f64::max);
    let mut r = p.c.clone();
    for (c, &y) in p.constraints.iter().zip(&s.y) {
        r.axpy(-y, &c.a);
    }
    let sgn = match p.sense {
        Sense::Minimize => -1.0,
        Sense::Maximize => 1.0,
    };
    r.axpy(sgn, &s.s);
    Ok(KktResiduals { primal_infeas, dual_infeas: r.frobenius_norm(), gap: s.x.inner(&s.s) })
}

struct Row {
    a: BlockMatrix,
    b: f64,
    nz: Vec<usize>,
    scale: f64,
}

/// Solves `p`. Malformed input is an `Err`; convergence trouble is reported
/// through [`SdpSolution::status`].
pub fn solve(p: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution, SdpError> {
    p.validate()?;
    let dims = p.block_dims.clone();
    let sgn = match p.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let c = p.c.scale(sgn);

    // row scaling so that ‖A_i‖_F <= 1 and |b_i| <= 1
    let mut rows: Vec<Row> = p
        .constraints
        .iter()
        .map(|con| {
            let norm = con.a.frobenius_norm().max(con.b.abs());
            let scale = if norm > 0.0 { 1.0 / norm } else { 1.0 };
            let a = con.a.scale(scale);
            let nz = a.nonzero_blocks();
            Row { a, b: con.b * scale, nz, scale }
        })
        .collect();

    let (kept, dropped) = independent_rows(&rows);
    if !dropped.is_empty() {
        warn!("dropping {} linearly dependent constraint(s): {:?}", dropped.len(), dropped);
    }
    let mut keep_mask = vec![false; rows.len()];
    for &k in &kept {
        keep_mask[k] = true;
    }
    let mut idx = 0;
    rows.retain(|_| {
        let keep = keep_mask[idx];
        idx += 1;
        keep
    });
    let m = rows.len();

    let tau = rows
        .iter()
        .map(|r| r.a.frobenius_norm())
        .fold(10f64.max(c.frobenius_norm()), f64::max);
    let mut x = BlockMatrix::identity(&dims).scale(tau);
    let mut s = BlockMatrix::identity(&dims).scale(tau);
    let mut y = vec![0.0; m];
    let ntot = p.total_dim().max(1) as f64;

    let mut history = Vec::new();
    let mut status = SolveStatus::MaxIters;
    let mut iterations = 0;
    let (mut last_ap, mut last_ad) = (0.0, 0.0);

    for iter in 0..=opts.max_iters {
        iterations = iter;
        let rp: Vec<f64> = rows.iter().map(|r| r.b - r.a.inner(&x)).collect();
        let mut rd = c.clone();
        for (r, &yi) in rows.iter().zip(&y) {
            rd.axpy(-yi, &r.a);
        }
        rd.axpy(-1.0, &s);
        let gap = x.inner(&s);
        let pobj_min = c.inner(&x);
        let dobj_min: f64 = rows.iter().zip(&y).map(|(r, yi)| r.b * yi).sum();
        let pinf = rows.iter().zip(&rp).map(|(r, v)| (v / r.scale).abs()).fold(0.0, f64::max);
        let dinf = rd.frobenius_norm();
        let infeasibility_term = rd.inner(&x) - y.iter().zip(&rp).map(|(a, b)| a * b).sum::<f64>();
        history.push(IterationRecord {
            iter,
            primal_obj: sgn * pobj_min + p.offset,
            dual_obj: sgn * dobj_min + p.offset,
            gap,
            primal_infeas: pinf,
            dual_infeas: dinf,
            infeasibility_term,
            step_primal: last_ap,
            step_dual: last_ad,
        });
        debug!(
            "iter {:3}  pobj {:+.10e}  dobj {:+.10e}  gap {:.3e}  pinf {:.3e}  dinf {:.3e}",
            iter, pobj_min, dobj_min, gap, pinf, dinf
        );

        if pinf <= opts.feas_tol && dinf <= opts.feas_tol && gap <= opts.gap_tol * pobj_min.abs().max(1.0) {
            status = SolveStatus::Optimal;
            break;
        }
        if pobj_min.abs() > opts.divergence_limit || dobj_min.abs() > opts.divergence_limit {
            status = SolveStatus::InfeasibleSuspected;
            break;
        }
        if iter == opts.max_iters {
            status = SolveStatus::MaxIters;
            break;
        }

        let Some((dx, dy, ds)) = hkm_direction(&rows, &x, &s, &rp, &rd, opts.sigma * gap / ntot) else {
            status = SolveStatus::NumericalFailure;
            break;
        };
        let (Some(ap), Some(ad)) = (max_step(&x, &dx), max_step(&s, &ds)) else {
            status = SolveStatus::NumericalFailure;
            break;
        };
        let ap = (opts.step_fraction * ap).min(1.0);
        let ad = (opts.step_fraction * ad).min(1.0);
        if ap < 1e-12 && ad < 1e-12 {
            status = SolveStatus::NumericalFailure;
            break;
        }
        x.axpy(ap, &dx);
        s.axpy(ad, &ds);
        for (yi, d) in y.iter_mut().zip(&dy) {
            *yi += ad * d;
        }
        last_ap = ap;
        last_ad = ad;
    }

    // back to the caller's rows and sense
    let mut y_full = vec![0.0; p.constraints.len()];
    for (k, &orig) in kept.iter().enumerate() {
        y_full[orig] = sgn * y[k] * rows[k].scale;
    }
    let mut sol = SdpSolution {
        primal_obj: p.objective(&x),
        dual_obj: p.constraints.iter().zip(&y_full).map(|(c, y)| c.b * y).sum::<f64>() + p.offset,
        x,
        y: y_full,
        s,
        residuals: KktResiduals { primal_infeas: 0.0, dual_infeas: 0.0, gap: 0.0 },
        status,
        iterations,
        history,
        dropped,
    };
    sol.residuals = kkt_residuals(p, &sol)?;
    if sol.status == SolveStatus::NumericalFailure && meets_invariants(&sol) {
        // stalled only at the last digits
        sol.status = SolveStatus::Optimal;
    }
    Ok(sol)
}

/// The acceptance thresholds for an optimal solution.
pub fn meets_invariants(sol: &SdpSolution) -> bool {
    let r = &sol.residuals;
    r.primal_infeas.max(r.dual_infeas) <= 1e-8
        && r.gap.abs() <= 1e-7 * sol.primal_obj.abs().max(1.0)
        && sol.x.lambda_min() >= -1e-8
        && sol.s.lambda_min() >= -1e-8
}

/// Greedy maximal independent subset of constraint rows via pivoted
/// Cholesky on their Gram matrix. Returns (kept, dropped), both sorted.
fn independent_rows(rows: &[Row]) -> (Vec<usize>, Vec<usize>) {
    let m = rows.len();
    if m == 0 {
        return (Vec::new(), Vec::new());
    }
    let gram = SymMatrix::from_fn(m, |i, j| rows[i].a.inner(&rows[j].a));
    let chol = match Cholesky::pivoted(&gram, 1e-10) {
        Ok(c) => c,
        Err(_) => return ((0..m).collect(), Vec::new()),
    };
    let mut kept: Vec<usize> = chol.pivots()[..chol.rank()].to_vec();
    let mut dropped: Vec<usize> = chol.pivots()[chol.rank()..].to_vec();
    kept.sort_unstable();
    dropped.sort_unstable();
    (kept, dropped)
}

/// HKM direction for target `μ_target = σ μ`.
fn hkm_direction(
    rows: &[Row],
    x: &BlockMatrix,
    s: &BlockMatrix,
    rp: &[f64],
    rd: &BlockMatrix,
    mu_target: f64,
) -> Option<(BlockMatrix, Vec<f64>, BlockMatrix)> {
    let nb = x.blocks.len();
    let mut sinv = Vec::with_capacity(nb);
    for k in 0..nb {
        let sk = &s.blocks[k];
        sinv.push(match sk.dim() {
            0 => SymMatrix::zeros(0),
            1 if sk.get(0, 0) > 0.0 => SymMatrix::diag(&[1.0 / sk.get(0, 0)]),
            1 => return None,
            _ => Cholesky::new(sk).ok()?.inverse(),
        });
    }
    let xd: Vec<Dense> = x.blocks.iter().map(SymMatrix::to_dense).collect();
    let sinv_d: Vec<Dense> = sinv.iter().map(SymMatrix::to_dense).collect();

    let m = rows.len();
    // G_j = X A_j S⁻¹ on the nonzero blocks of A_j
    let g: Vec<Vec<(usize, Dense)>> = rows
        .iter()
        .map(|r| r.nz.iter().map(|&k| (k, xd[k].matmul(&r.a.blocks[k].to_dense()).matmul(&sinv_d[k]))).collect())
        .collect();
    let mut schur = SymMatrix::zeros(m);
    for j in 0..m {
        for i in 0..=j {
            let v: f64 = g[j].iter().filter(|(k, _)| rows[i].nz.contains(k)).map(|(k, gj)| gj.inner_sym(&rows[i].a.blocks[*k])).sum();
            let w: f64 = g[i].iter().filter(|(k, _)| rows[j].nz.contains(k)).map(|(k, gi)| gi.inner_sym(&rows[j].a.blocks[*k])).sum();
            schur.set(i, j, 0.5 * (v + w));
        }
    }

    // T = σμ S⁻¹ − X − X R_d S⁻¹
    let t: Vec<Dense> = (0..nb)
        .map(|k| {
            let xrs = xd[k].matmul(&rd.blocks[k].to_dense()).matmul(&sinv_d[k]);
            let n = xrs.dim;
            let data = (0..n * n).map(|q| mu_target * sinv_d[k].data[q] - xd[k].data[q] - xrs.data[q]).collect();
            Dense { dim: n, data }
        })
        .collect();
    let rhs: Vec<f64> = rows
        .iter()
        .zip(rp)
        .map(|(r, &rpi)| rpi - r.nz.iter().map(|&k| t[k].inner_sym(&r.a.blocks[k])).sum::<f64>())
        .collect();

    let dy = solve_schur(&schur, &rhs)?;
    let mut ds = rd.clone();
    for (r, &d) in rows.iter().zip(&dy) {
        ds.axpy(-d, &r.a);
    }
    let dx_blocks = (0..nb)
        .map(|k| {
            let xds = xd[k].matmul(&ds.blocks[k].to_dense()).matmul(&sinv_d[k]);
            let n = xds.dim;
            let raw = Dense {
                dim: n,
                data: (0..n * n).map(|q| mu_target * sinv_d[k].data[q] - xd[k].data[q] - xds.data[q]).collect(),
            };
            SymMatrix::symmetric_part(&raw)
        })
        .collect();
    Some((BlockMatrix::from_blocks(dx_blocks), dy, ds))
}

fn solve_schur(schur: &SymMatrix, rhs: &[f64]) -> Option<Vec<f64>> {
    let m = schur.dim();
    if m == 0 {
        return Some(Vec::new());
    }
    if let Ok(c) = Cholesky::new(schur) {
        return Some(c.solve(rhs));
    }
    let base = schur.diagonal().into_iter().fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);
    for k in [1e-14, 1e-12, 1e-10] {
        let mut reg = schur.clone();
        for i in 0..m {
            reg.set(i, i, reg.get(i, i) + k * base);
        }
        if let Ok(c) = Cholesky::new(&reg) {
            debug!("Schur complement regularised by {:e}", k * base);
            return Some(c.solve(rhs));
        }
    }
    None
}

/// Largest `a` with `X + a ΔX ⪰ 0` (may be infinite).
fn max_step(x: &BlockMatrix, dx: &BlockMatrix) -> Option<f64> {
    let mut best = f64::INFINITY;
    for (xb, db) in x.blocks.iter().zip(&dx.blocks) {
        let lam = match xb.dim() {
            0 => continue,
            1 => db.get(0, 0) / xb.get(0, 0),
            _ => {
                let chol = Cholesky::new(xb).ok()?;
                sym_eig(&chol.congruence_inverse(db)).ok()?.lambda_min()
            }
        };
        if !lam.is_finite() {
            return None;
        }
        if lam < 0.0 {
            best = best.min(-1.0 / lam);
        }
    }
    Some(best)
}
