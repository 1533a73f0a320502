//! Graph parameters and the bounds relating them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::formulations::{
    build_alpha0_dual, build_alpha_tilde_feas, build_dnn_copositive, build_gw, build_inv_theta, build_theta,
    Formulation, ThetaForm,
};
use crate::graph::{complement, matrices, Graph};
use crate::linalg::{psd_check, sym_eig, SymMatrix};
use crate::sdp::{solve, SdpSolution, SolverOptions};
use crate::Error;

/// Largest graph accepted by [`maxcut_exact`].
pub const MAXCUT_MAX_N: usize = 26;
/// Largest graph accepted by [`clique_number`] and [`max_clique`].
pub const CLIQUE_MAX_N: usize = 40;
/// Iteration cap of the α₀ bisection.
pub const ALPHA0_MAX_BISECTIONS: usize = 60;
pub const DEFAULT_ALPHA0_TOL: f64 = 1e-9;
pub const DEFAULT_ALPHA_TILDE_TOL: f64 = 1e-6;
/// `α` counts as feasible for the weighted program when `t* >= −margin`;
/// absorbs solver error at boundary points such as `α = 1/2` on bipartite
/// graphs.
pub const ALPHA_TILDE_MARGIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alpha0Method {
    Bisection,
    ClosedFormRegular,
    SdpDual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Alpha0Result {
    pub value: f64,
    /// `λ_min(A_value)`.
    pub lambda_min_at_value: f64,
    pub method: Alpha0Method,
    pub iterations: usize,
}

fn require_edges(g: &Graph) -> Result<(), Error> {
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    Ok(())
}

/// Solves `f` and fails unless the solver reports an optimal solution.
pub fn solve_formulation(f: &Formulation, opts: &SolverOptions, program: &'static str) -> Result<SdpSolution, Error> {
    let sol = solve(&f.problem, opts)?;
    if !sol.is_optimal() {
        return Err(Error::Solver { program, status: sol.status });
    }
    Ok(sol)
}

fn lambda_min(m: &SymMatrix) -> Result<f64, Error> {
    Ok(sym_eig(m)?.lambda_min())
}

/// Smallest `α` with `A_α ⪰ 0`, by bisection on `[0, 1/2]`.
///
/// The feasible set is an interval `[α₀, 1]` and always contains `1/2`, so
/// `hi` stays feasible throughout and is what gets returned.
pub fn alpha0(g: &Graph, tol: f64) -> Result<Alpha0Result, Error> {
    require_edges(g)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", tol)));
    }
    let mats = matrices(g);
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    let mut iterations = 0;
    while hi - lo > tol && iterations < ALPHA0_MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if psd_check(&mats.a_alpha(mid), 0.0)?.is_psd {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(Alpha0Result {
        value: hi,
        lambda_min_at_value: lambda_min(&mats.a_alpha(hi))?,
        method: Alpha0Method::Bisection,
        iterations,
    })
}

/// `−λ_min(A) / (d − λ_min(A))` for a `d`-regular graph.
pub fn alpha0_closed_regular(g: &Graph) -> Result<f64, Error> {
    require_edges(g)?;
    let d = g.regular_degree().ok_or(Error::NotRegular)? as f64;
    let lm = lambda_min(&matrices(g).a.to_sym())?;
    Ok(-lm / (d - lm))
}

/// `(−λ_min/(Δ − λ_min), −λ_min/(δ − λ_min))`, which bracket α₀.
///
/// The upper value exceeds `1/2` whenever `δ` is small enough; it is still
/// returned unclipped. With an isolated vertex (`δ = 0`) it equals `1`.
pub fn alpha0_degree_bounds(g: &Graph) -> Result<(f64, f64), Error> {
    require_edges(g)?;
    let lm = lambda_min(&matrices(g).a.to_sym())?;
    let lower = -lm / (g.max_degree() as f64 - lm);
    let upper = -lm / (g.min_degree() as f64 - lm);
    Ok((lower, upper))
}

/// α₀ as the optimum of its dual semidefinite program.
pub fn alpha0_via_dual(g: &Graph, opts: &SolverOptions) -> Result<f64, Error> {
    let f = build_alpha0_dual(g)?;
    Ok(solve_formulation(&f, opts, "alpha0 dual")?.primal_obj)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaResult {
    /// Optimum of the max form.
    pub value: f64,
    /// Optimum of the min form.
    pub min_form_value: f64,
}

/// Agreement required between the two theta forms.
pub const THETA_CROSS_CHECK_TOL: f64 = 1e-5;

/// Lovász theta number, computed from both forms and cross-checked.
pub fn lovasz_theta(g: &Graph, opts: &SolverOptions) -> Result<ThetaResult, Error> {
    if g.n() == 1 {
        return Ok(ThetaResult { value: 1.0, min_form_value: 1.0 });
    }
    let hi = solve_formulation(&build_theta(g, ThetaForm::Max), opts, "theta max form")?.primal_obj;
    let lo = solve_formulation(&build_theta(g, ThetaForm::Min), opts, "theta min form")?.primal_obj;
    if (hi - lo).abs() > THETA_CROSS_CHECK_TOL {
        return Err(Error::CrossCheck { what: "theta max and min forms", a: hi, b: lo, tol: THETA_CROSS_CHECK_TOL });
    }
    Ok(ThetaResult { value: hi, min_form_value: lo })
}

/// `(2m/n)(ϑα − 1)/(ϑ − 1)` given `ϑ = ϑ(Ḡ)`; an upper bound on
/// `λ_min(A_α)`.
pub fn lambda_min_alpha_bound_with(g: &Graph, alpha: f64, theta_complement: f64) -> Result<f64, Error> {
    require_edges(g)?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha must lie in [0, 1], got {}", alpha)));
    }
    let (m, n) = (g.m() as f64, g.n() as f64);
    Ok(2.0 * m / n * (theta_complement * alpha - 1.0) / (theta_complement - 1.0))
}

/// As [`lambda_min_alpha_bound_with`], computing `ϑ(Ḡ)` first.
pub fn lambda_min_alpha_bound(g: &Graph, alpha: f64, opts: &SolverOptions) -> Result<f64, Error> {
    require_edges(g)?;
    let theta = lovasz_theta(&complement(g), opts)?.value;
    lambda_min_alpha_bound_with(g, alpha, theta)
}

/// Optimum of the renormalised theta program, `1/ϑ(Ḡ)`.
pub fn inv_theta_value(g: &Graph, opts: &SolverOptions) -> Result<f64, Error> {
    if g.n() == 1 {
        return Ok(1.0);
    }
    Ok(solve_formulation(&build_inv_theta(g), opts, "inverse theta")?.primal_obj)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaTildeResult {
    /// Smallest feasible `α` found (upper end of the final bracket).
    pub value: f64,
    /// Largest `α` found infeasible.
    pub infeasible_below: f64,
    /// `t*` at `value`.
    pub t_at_value: f64,
    pub solves: usize,
}

/// `t*` of the weighted feasibility program at `alpha`.
pub fn alpha_tilde_margin(g: &Graph, alpha: f64, opts: &SolverOptions) -> Result<f64, Error> {
    let f = build_alpha_tilde_feas(g, alpha)?;
    Ok(solve_formulation(&f, opts, "weighted feasibility")?.primal_obj)
}

/// Weighted threshold by bisection over `α ∈ (0, 1/2]` on the sign of the
/// feasibility margin `t*`.
pub fn alpha_tilde(g: &Graph, tol: f64, opts: &SolverOptions) -> Result<AlphaTildeResult, Error> {
    require_edges(g)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", tol)));
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    let mut t_hi = alpha_tilde_margin(g, hi, opts)?;
    let mut solves = 1;
    if t_hi < -ALPHA_TILDE_MARGIN {
        return Err(Error::CrossCheck { what: "weighted feasibility at 1/2", a: t_hi, b: 0.0, tol: 0.0 });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let t = alpha_tilde_margin(g, mid, opts)?;
        solves += 1;
        if t >= -ALPHA_TILDE_MARGIN {
            hi = mid;
            t_hi = t;
        } else {
            lo = mid;
        }
    }
    Ok(AlphaTildeResult { value: hi, infeasible_below: lo, t_at_value: t_hi, solves })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxCut {
    pub size: usize,
    /// Side of the cut containing vertex 0, sorted.
    pub side: Vec<usize>,
}

/// Exact maximum cut by Gray-code enumeration of the `2^(n−1)` bipartitions
/// with vertex 0 fixed. Ties go to the lexicographically smallest side.
pub fn maxcut_exact(g: &Graph) -> Result<MaxCut, Error> {
    let n = g.n();
    if n > MAXCUT_MAX_N {
        return Err(Error::TooLarge { what: "exact max-cut", n, cap: MAXCUT_MAX_N });
    }
    let adj = g.adjacency_masks();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    // side holds vertex 0 and starts as {0}
    let mut side: u64 = 1;
    let mut cut = adj[0].count_ones() as i64;
    let (mut best, mut best_side) = (cut, side);
    for k in 1u64..(1u64 << (n.max(1) - 1)) {
        let v = k.trailing_zeros() as usize + 1;
        let bit = 1u64 << v;
        let same = if side & bit != 0 { side } else { full & !side };
        let s = (adj[v] & same).count_ones() as i64;
        let o = adj[v].count_ones() as i64 - s;
        cut += s - o;
        side ^= bit;
        if cut > best || (cut == best && lex_less(side, best_side)) {
            best = cut;
            best_side = side;
        }
    }
    let side = (0..n).filter(|&i| best_side >> i & 1 == 1).collect();
    Ok(MaxCut { size: best as usize, side })
}

/// Lexicographic comparison of the sorted element lists of two bit sets.
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let k = diff.trailing_zeros();
    let above = if k == 63 { 0 } else { !0u64 << (k + 1) };
    if a >> k & 1 == 1 {
        b & above != 0
    } else {
        a & above == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GwResult {
    pub value: f64,
    /// Optimal unit-diagonal matrix.
    pub x: SymMatrix,
}

/// Max-cut relaxation value `M*` and its optimal matrix.
pub fn gw_value(g: &Graph, opts: &SolverOptions) -> Result<GwResult, Error> {
    let f = build_gw(g);
    if g.m() == 0 {
        return Ok(GwResult { value: 0.0, x: SymMatrix::identity(g.n()) });
    }
    let sol = solve_formulation(&f, opts, "max-cut relaxation")?;
    Ok(GwResult { value: sol.primal_obj, x: f.primal_matrix(&sol) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutBounds {
    pub maxcut: MaxCut,
    pub gw: f64,
    /// `1 − |E|/(2M)`.
    pub lower_maxcut: f64,
    /// `1 − |E|/(2M*)`.
    pub lower_gw: f64,
    /// `(|E|/2)(δ − λ_min)/δ`; `None` when `δ = 0`.
    pub maxcut_upper: Option<f64>,
}

pub fn cut_bounds(g: &Graph, opts: &SolverOptions) -> Result<CutBounds, Error> {
    require_edges(g)?;
    let maxcut = maxcut_exact(g)?;
    let gw = gw_value(g, opts)?.value;
    let m = g.m() as f64;
    let delta = g.min_degree() as f64;
    let lm = lambda_min(&matrices(g).a.to_sym())?;
    Ok(CutBounds {
        lower_maxcut: 1.0 - m / (2.0 * maxcut.size as f64),
        lower_gw: 1.0 - m / (2.0 * gw),
        maxcut_upper: (delta > 0.0).then(|| m / 2.0 * (delta - lm) / delta),
        maxcut,
        gw,
    })
}

/// A maximum clique (sorted), by Bron–Kerbosch with pivoting. The pivot
/// maximises `|P ∩ N(u)|`, ties to the lowest index.
pub fn max_clique(g: &Graph) -> Result<Vec<usize>, Error> {
    let n = g.n();
    if n > CLIQUE_MAX_N {
        return Err(Error::TooLarge { what: "clique search", n, cap: CLIQUE_MAX_N });
    }
    let adj = g.adjacency_masks();
    let mut best = 0u64;
    let all = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    bron_kerbosch(&adj, 0, all, 0, &mut best);
    Ok((0..n).filter(|&i| best >> i & 1 == 1).collect())
}

fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, best: &mut u64) {
    if p == 0 {
        if x == 0 && r.count_ones() > best.count_ones() {
            *best = r;
        }
        return;
    }
    if r.count_ones() + p.count_ones() <= best.count_ones() {
        return;
    }
    let mut pivot = 0;
    let mut pivot_score = None;
    let mut px = p | x;
    while px != 0 {
        let u = px.trailing_zeros() as usize;
        px &= px - 1;
        let score = (p & adj[u]).count_ones();
        if pivot_score.is_none_or(|s| score > s) {
            pivot = u;
            pivot_score = Some(score);
        }
    }
    let mut cand = p & !adj[pivot];
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        let bit = 1u64 << v;
        bron_kerbosch(adj, r | bit, p & adj[v], x & adj[v], best);
        p &= !bit;
        x |= bit;
    }
}

pub fn clique_number(g: &Graph) -> Result<usize, Error> {
    Ok(max_clique(g)?.len())
}

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SIMPLEX_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotzkinStraus {
    pub omega: usize,
    /// `1/ω`.
    pub certified: f64,
    /// Maximum clique whose uniform indicator attains the minimum.
    pub clique: Vec<usize>,
    /// `xᵀ(Ā + I)x` at the uniform clique indicator.
    pub attained: f64,
    /// Smallest `xᵀ(Ā + I)x` over the sampled simplex points.
    pub empirical_min: f64,
    pub samples: usize,
}

/// Uniform sample from the standard simplex by normalised exponential
/// spacings.
pub fn sample_simplex(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= s);
    x
}

/// Clique value `1/ω` of the simplex quadratic program
/// `min{xᵀ(Ā + I)x : x >= 0, 1ᵀx = 1}`, with a sampling check.
pub fn motzkin_straus_value(g: &Graph, samples: usize, seed: u64) -> Result<MotzkinStraus, Error> {
    require_edges(g)?;
    let clique = max_clique(g)?;
    let omega = clique.len();
    let mut q = matrices(g).abar.to_sym();
    q.axpy(1.0, &SymMatrix::identity(g.n()));
    let mut x = vec![0.0; g.n()];
    for &v in &clique {
        x[v] = 1.0 / omega as f64;
    }
    let attained = q.quad_form(&x);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let empirical_min =
        (0..samples).map(|_| q.quad_form(&sample_simplex(&mut rng, g.n()))).fold(f64::INFINITY, f64::min);
    Ok(MotzkinStraus { omega, certified: 1.0 / omega as f64, clique, attained, empirical_min, samples })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CopositiveBounds {
    pub omega: usize,
    /// `1/ω`.
    pub lower: f64,
    pub upper: f64,
    /// Optimum of the doubly-nonnegative inner approximation: a second
    /// lower bound on the copositive value.
    pub dnn: f64,
}

pub fn copositive_bounds(g: &Graph, opts: &SolverOptions) -> Result<CopositiveBounds, Error> {
    require_edges(g)?;
    let omega = clique_number(g)?;
    let dnn = solve_formulation(&build_dnn_copositive(g)?, opts, "doubly nonnegative program")?.primal_obj;
    Ok(CopositiveBounds { omega, lower: 1.0 / omega as f64, upper: 0.5, dnn })
}

/// Every parameter and bound for one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub alpha0: Alpha0Result,
    pub degree_lower: f64,
    pub degree_upper: f64,
    /// `degree_upper > 1/2`, which says nothing beyond `α₀ <= 1/2`.
    pub degree_upper_vacuous: bool,
    pub theta_complement: f64,
    /// `1/ϑ(Ḡ)`.
    pub theta_lower: f64,
    pub cuts: CutBounds,
    pub copositive: CopositiveBounds,
}

pub fn bounds_report(g: &Graph, tol: f64, opts: &SolverOptions) -> Result<BoundsReport, Error> {
    let alpha0 = alpha0(g, tol)?;
    let (degree_lower, degree_upper) = alpha0_degree_bounds(g)?;
    let theta_complement = lovasz_theta(&complement(g), opts)?.value;
    Ok(BoundsReport {
        alpha0,
        degree_lower,
        degree_upper,
        degree_upper_vacuous: degree_upper > 0.5,
        theta_complement,
        theta_lower: 1.0 / theta_complement,
        cuts: cut_bounds(g, opts)?,
        copositive: copositive_bounds(g, opts)?,
    })
}
