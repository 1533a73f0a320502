//! Explicit feasible points for the α₀ programs, exact and numeric checks
//! of those points, and a per-graph report of every bound.

use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::formulations::{build_theta, theta_min_variables, FormulationKind, FormulationTag, ThetaForm};
use crate::graph::{complement, encode_graph6, matrices, Graph, IntMatrix};
use crate::linalg::{psd_check, sym_eig, trace_inner, SymMatrix};
use crate::parameters::{
    alpha0, alpha0_closed_regular, alpha0_degree_bounds, alpha0_via_dual, alpha_tilde, clique_number,
    copositive_bounds, cut_bounds, gw_value, inv_theta_value, lambda_min_alpha_bound_with, lovasz_theta,
    maxcut_exact, sample_simplex, solve_formulation, CLIQUE_MAX_N, DEFAULT_ALPHA0_TOL, DEFAULT_ALPHA_TILDE_TOL,
};
use crate::sdp::SolverOptions;
use crate::Error;

/// Feasibility and objective tolerance for certificates.
pub const CERTIFICATE_TOL: f64 = 1e-7;
/// Copositivity is accepted when the sampled minimum is at least `−COPOSITIVE_TOL`.
pub const COPOSITIVE_TOL: f64 = 1e-9;
pub const DEFAULT_COPOSITIVE_TRIALS: usize = 20_000;

/// Which construction produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `vvᵀ/(Δ − λ_min)` from a unit bottom eigenvector of `A`.
    Eigenvector,
    /// `xxᵀ/(4M)` from a maximum cut.
    Cut,
    /// `X*/(4M*)` from an optimal max-cut relaxation matrix.
    Relaxation,
    /// `(ϑI + Z − J)/(n(ϑ − 1))` from the min form of `ϑ(Ḡ)`.
    ThetaMin,
    /// `(Ā + I − J/ω)/(2|E|)`.
    MotzkinStraus,
    /// `I/(2m + 1)`.
    ScaledIdentity,
}

/// An identity checked in exact rational arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactIdentity {
    pub statement: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl ExactIdentity {
    fn new(statement: &str, lhs: Rational64, rhs: Rational64) -> Self {
        ExactIdentity { statement: statement.to_string(), lhs: lhs.to_string(), rhs: rhs.to_string(), holds: lhs == rhs }
    }
}

/// A matrix claimed feasible for one of the α₀-type programs, stored as an
/// unscaled matrix times a normalisation constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualCertificate {
    pub program: FormulationTag,
    pub provenance: Provenance,
    pub raw: SymMatrix,
    pub scale: f64,
    pub claimed_objective: f64,
    /// Identities verified on integer or rational data before any division.
    pub exact: Vec<ExactIdentity>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    /// Sum of constraint violations, including the cone margin when negative.
    pub feasibility_residual: f64,
    pub achieved_objective: f64,
    pub objective_error: f64,
    /// `λ_min(X)` for PSD programs, the sampled minimum of `hᵀXh` over the
    /// simplex for the copositive program.
    pub cone_margin: f64,
    pub exact_ok: bool,
    pub passed: bool,
}

impl DualCertificate {
    pub fn matrix(&self) -> SymMatrix {
        self.raw.scale(self.scale)
    }

    /// Re-evaluates constraints and objective of the certificate on `g`.
    pub fn check(&self, g: &Graph) -> Result<CertificateCheck, Error> {
        let x = self.matrix();
        let mats = matrices(g);
        let l = mats.l.to_sym();
        let neg_a = mats.a.to_sym().scale(-1.0);
        let (residual, objective, margin) = match self.program.kind {
            FormulationKind::MinEigenDual(alpha) => {
                let lm = sym_eig(&x)?.lambda_min();
                let r = (x.trace() - 1.0).abs() + (-lm).max(0.0);
                (r, trace_inner(&x, &mats.a_alpha(alpha))?, lm)
            }
            FormulationKind::Copositive => {
                let c = copositivity_sample_check(&x, DEFAULT_COPOSITIVE_TRIALS, 0);
                let r = (trace_inner(&x, &l)? - 1.0).abs() + (-c.min_qform - COPOSITIVE_TOL).max(0.0);
                (r, trace_inner(&x, &neg_a)?, c.min_qform)
            }
            _ => {
                let lm = sym_eig(&x)?.lambda_min();
                let r = (trace_inner(&x, &l)? - 1.0).max(0.0) + (-lm).max(0.0);
                (r, trace_inner(&x, &neg_a)?, lm)
            }
        };
        let objective_error = (objective - self.claimed_objective).abs();
        let exact_ok = self.exact.iter().all(|e| e.holds);
        Ok(CertificateCheck {
            feasibility_residual: residual,
            achieved_objective: objective,
            objective_error,
            cone_margin: margin,
            exact_ok,
            passed: residual <= CERTIFICATE_TOL && objective_error <= CERTIFICATE_TOL && exact_ok,
        })
    }
}

fn require_edges(g: &Graph) -> Result<(), Error> {
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    Ok(())
}

fn alpha0_tag() -> FormulationTag {
    FormulationTag::new(FormulationKind::Alpha0Dual)
}

/// `I/(2m + 1)`, strictly feasible for the α₀ program.
pub fn cert_scaled_identity(g: &Graph) -> Result<DualCertificate, Error> {
    require_edges(g)?;
    let m = g.m() as i64;
    let tr_l: i64 = (0..g.n()).map(|i| matrices(g).l.get(i, i)).sum();
    Ok(DualCertificate {
        program: alpha0_tag(),
        provenance: Provenance::ScaledIdentity,
        raw: SymMatrix::identity(g.n()),
        scale: 1.0 / (2 * m + 1) as f64,
        claimed_objective: 0.0,
        exact: vec![ExactIdentity::new("<I, L> = 2m", tr_l.into(), (2 * m).into())],
    })
}

/// `vvᵀ/(Δ − λ_min)` for the first unit eigenvector `v` of `λ_min(A)`.
pub fn cert_eigvec(g: &Graph) -> Result<DualCertificate, Error> {
    require_edges(g)?;
    let spectrum = sym_eig(&matrices(g).a.to_sym())?;
    let lm = spectrum.lambda_min();
    let denom = g.max_degree() as f64 - lm;
    Ok(DualCertificate {
        program: alpha0_tag(),
        provenance: Provenance::Eigenvector,
        raw: SymMatrix::outer(spectrum.vector(0)),
        scale: 1.0 / denom,
        claimed_objective: -lm / denom,
        exact: Vec::new(),
    })
}

/// `xxᵀ/(4M)` for the `±1` indicator `x` of `side`, where `size` is the
/// claimed cut size. Fails when `side` does not cut exactly `size` edges.
pub fn cert_cut(g: &Graph, side: &[usize], size: usize) -> Result<DualCertificate, Error> {
    require_edges(g)?;
    if size == 0 {
        return Err(Error::InvalidArgument("cut certificate needs a cut of size >= 1".into()));
    }
    let mut x = vec![-1i64; g.n()];
    for &v in side {
        if v >= g.n() {
            return Err(Error::InvalidArgument(format!("vertex {} out of range", v)));
        }
        x[v] = 1;
    }
    let mats = matrices(g);
    let xx = IntMatrix::outer(&x);
    let (m, big_m) = (g.m() as i64, size as i64);
    let on_l = xx.inner(&mats.l);
    if on_l != 4 * big_m {
        return Err(Error::InvalidArgument(format!("side cuts {} edges, not {}", on_l / 4, size)));
    }
    let exact = vec![
        ExactIdentity::new("<xx^T, L> = 4M", on_l.into(), (4 * big_m).into()),
        ExactIdentity::new("<xx^T, A> = 2|E| - 4M", xx.inner(&mats.a).into(), (2 * m - 4 * big_m).into()),
    ];
    Ok(DualCertificate {
        program: alpha0_tag(),
        provenance: Provenance::Cut,
        raw: xx.to_sym(),
        scale: 1.0 / (4 * big_m) as f64,
        claimed_objective: 1.0 - m as f64 / (2 * big_m) as f64,
        exact,
    })
}

/// `X*/(4M*)` from an optimal unit-diagonal matrix `x_star` with value
/// `m_star`.
pub fn cert_gw(g: &Graph, x_star: &SymMatrix, m_star: f64) -> Result<DualCertificate, Error> {
    require_edges(g)?;
    if x_star.dim() != g.n() {
        return Err(Error::InvalidArgument(format!("matrix has dim {}, graph has n = {}", x_star.dim(), g.n())));
    }
    let diag_err = x_star.diagonal().iter().map(|d| (d - 1.0).abs()).fold(0.0, f64::max);
    let psd = psd_check(x_star, CERTIFICATE_TOL)?;
    if diag_err > CERTIFICATE_TOL || !psd.is_psd || !(m_star > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "relaxation matrix infeasible: diagonal error {:e}, lambda_min {:e}, value {}",
            diag_err, psd.lambda_min, m_star
        )));
    }
    Ok(DualCertificate {
        program: alpha0_tag(),
        provenance: Provenance::Relaxation,
        raw: x_star.clone(),
        scale: 1.0 / (4.0 * m_star),
        claimed_objective: 1.0 - g.m() as f64 / (2.0 * m_star),
        exact: Vec::new(),
    })
}

/// `(ϑI + Z − J)/(n(ϑ − 1))` for the eigenvalue program of `A_α`, where
/// `(ϑ, Z)` solve the min form of `ϑ(Ḡ)`. The claimed objective
/// `2m(ϑα − 1)/(n(ϑ − 1))` uses `⟨I, A_α⟩ = 2mα`, `⟨J, A_α⟩ = 2m` and
/// `⟨Z, A_α⟩ = 0`.
pub fn cert_theta_min(g: &Graph, theta: f64, z: &SymMatrix, alpha: f64) -> Result<DualCertificate, Error> {
    require_edges(g)?;
    let n = g.n();
    if z.dim() != n {
        return Err(Error::InvalidArgument(format!("Z has dim {}, graph has n = {}", z.dim(), n)));
    }
    if theta < 2.0 - 1e-6 {
        return Err(Error::InvalidArgument(format!("theta of the complement must be >= 2, got {}", theta)));
    }
    for i in 0..n {
        for j in 0..n {
            if z.get(i, j) != 0.0 && (i == j || g.has_edge(i, j)) {
                return Err(Error::InvalidArgument(format!("Z is nonzero at ({}, {})", i, j)));
            }
        }
    }
    let mut raw = z.clone();
    raw.axpy(theta, &SymMatrix::identity(n));
    raw.axpy(-1.0, &SymMatrix::ones(n));
    let (m, nf) = (g.m() as f64, n as f64);
    Ok(DualCertificate {
        program: FormulationTag::new(FormulationKind::MinEigenDual(alpha)),
        provenance: Provenance::ThetaMin,
        raw,
        scale: 1.0 / (nf * (theta - 1.0)),
        claimed_objective: (2.0 * m * theta * alpha - 2.0 * m) / (nf * (theta - 1.0)),
        exact: Vec::new(),
    })
}

/// `Y/(2|E|)` with `Y = Ā + I − J/ω`, for the copositive program.
/// `⟨L, Y⟩ = 2|E|` and `⟨−A, Y⟩ = 2|E|/ω` are checked in rational
/// arithmetic.
pub fn cert_motzkin(g: &Graph, omega: usize) -> Result<DualCertificate, Error> {
    require_edges(g)?;
    if omega < 2 || omega > g.n() {
        return Err(Error::InvalidArgument(format!("clique number {} impossible for this graph", omega)));
    }
    if g.n() <= CLIQUE_MAX_N {
        let actual = clique_number(g)?;
        if actual != omega {
            return Err(Error::InvalidArgument(format!("clique number is {}, not {}", actual, omega)));
        }
    }
    let n = g.n();
    let mats = matrices(g);
    let inv_omega = Rational64::new(1, omega as i64);
    let y = |i: usize, j: usize| -> Rational64 {
        Rational64::from(mats.abar.get(i, j) + i64::from(i == j)) - inv_omega
    };
    let mut on_l = Rational64::from(0);
    let mut on_neg_a = Rational64::from(0);
    for i in 0..n {
        for j in 0..n {
            on_l += Rational64::from(mats.l.get(i, j)) * y(i, j);
            on_neg_a -= Rational64::from(mats.a.get(i, j)) * y(i, j);
        }
    }
    let two_m = Rational64::from(2 * g.m() as i64);
    let exact = vec![
        ExactIdentity::new("<L, Y> = 2|E|", on_l, two_m),
        ExactIdentity::new("<-A, Y> = 2|E|/omega", on_neg_a, two_m * inv_omega),
    ];
    let raw = SymMatrix::from_fn(n, |i, j| {
        let r = y(i, j);
        *r.numer() as f64 / *r.denom() as f64
    });
    Ok(DualCertificate {
        program: FormulationTag::new(FormulationKind::Copositive),
        provenance: Provenance::MotzkinStraus,
        raw,
        scale: 1.0 / (2 * g.m()) as f64,
        claimed_objective: 1.0 / omega as f64,
        exact,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopositivityCheck {
    /// Smallest `hᵀMh` found over `h >= 0`, `‖h‖₁ = 1`.
    pub min_qform: f64,
    pub argmin: Vec<f64>,
    pub trials: usize,
}

/// Samples `hᵀMh` over the standard simplex. Coordinate vectors and the
/// exact minimiser on every two-element support are always included, so
/// any violation visible on a `2 x 2` principal block is found. A negative
/// result disproves copositivity; a nonnegative one is only evidence.
pub fn copositivity_sample_check(m: &SymMatrix, trials: usize, seed: u64) -> CopositivityCheck {
    let n = m.dim();
    let mut best = f64::INFINITY;
    let mut argmin = vec![0.0; n];
    let consider = |h: Vec<f64>, best: &mut f64, argmin: &mut Vec<f64>| {
        let q = m.quad_form(&h);
        if q < *best {
            *best = q;
            *argmin = h;
        }
    };
    for i in 0..n {
        let mut h = vec![0.0; n];
        h[i] = 1.0;
        consider(h, &mut best, &mut argmin);
        for j in i + 1..n {
            let t = pair_minimiser(m.get(i, i), m.get(i, j), m.get(j, j));
            let mut h = vec![0.0; n];
            h[i] = t;
            h[j] = 1.0 - t;
            consider(h, &mut best, &mut argmin);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        consider(sample_simplex(&mut rng, n), &mut best, &mut argmin);
    }
    CopositivityCheck { min_qform: best, argmin, trials }
}

/// Minimiser over `t ∈ [0, 1]` of `a t² + 2b t(1−t) + c (1−t)²`.
fn pair_minimiser(a: f64, b: f64, c: f64) -> f64 {
    let q = |t: f64| a * t * t + 2.0 * b * t * (1.0 - t) + c * (1.0 - t) * (1.0 - t);
    let curv = a - 2.0 * b + c;
    let mut cands = vec![0.0, 1.0];
    if curv > 0.0 {
        cands.push(((c - b) / curv).clamp(0.0, 1.0));
    }
    cands.into_iter().min_by(|&s, &t| q(s).total_cmp(&q(t))).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakDuality {
    /// `⟨X, −A⟩`.
    pub v1: f64,
    /// `α⟨X, L⟩`.
    pub v2: f64,
    /// `α`.
    pub v3: f64,
    pub pass: bool,
}

/// Evaluates `⟨X, −A⟩ <= α⟨X, L⟩ <= α` for `X` feasible in the α₀
/// program; passes when both links hold within `1e-8`.
pub fn weak_duality_check(g: &Graph, x: &SymMatrix, alpha: f64) -> Result<WeakDuality, Error> {
    let mats = matrices(g);
    if x.dim() != g.n() {
        return Err(Error::InvalidArgument(format!("matrix has dim {}, graph has n = {}", x.dim(), g.n())));
    }
    let on_l = trace_inner(x, &mats.l.to_sym())?;
    let psd = psd_check(x, 1e-8)?;
    if !psd.is_psd || on_l > 1.0 + 1e-8 {
        return Err(Error::InvalidArgument(format!(
            "matrix infeasible: lambda_min {:e}, <X, L> = {}",
            psd.lambda_min, on_l
        )));
    }
    let v1 = -trace_inner(x, &mats.a.to_sym())?;
    let v2 = alpha * on_l;
    Ok(WeakDuality { v1, v2, v3: alpha, pass: v1 <= v2 + 1e-8 && v2 <= alpha + 1e-8 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    /// `lhs <= rhs`; slack is `rhs − lhs`.
    Inequality,
    /// `lhs = rhs`; slack is `rhs − lhs`.
    Equality,
    /// `lhs < rhs`; slack is `rhs − lhs`.
    Strict,
    /// A certificate check; `lhs` is the achieved and `rhs` the claimed
    /// objective.
    Certificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// A dependency failed; the note says why.
    Skipped,
    /// The claim's hypothesis does not hold for this graph.
    NotApplicable,
}

pub const INEQUALITY_TOL: f64 = 1e-6;
pub const EQUALITY_TOL: f64 = 1e-5;
pub const STRICT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimRow {
    pub claim: String,
    pub statement: String,
    pub kind: ClaimKind,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
    pub outcome: Outcome,
    pub note: Option<String>,
}

impl ClaimRow {
    fn compare(claim: &str, statement: &str, kind: ClaimKind, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        let ok = match kind {
            ClaimKind::Inequality => slack >= -INEQUALITY_TOL,
            ClaimKind::Equality => slack.abs() <= EQUALITY_TOL,
            ClaimKind::Strict => slack > STRICT_TOL,
            ClaimKind::Certificate => slack.abs() <= CERTIFICATE_TOL,
        };
        ClaimRow {
            claim: claim.into(),
            statement: statement.into(),
            kind,
            lhs: Some(lhs),
            rhs: Some(rhs),
            slack: Some(slack),
            outcome: if ok && slack.is_finite() { Outcome::Pass } else { Outcome::Fail },
            note: None,
        }
    }

    fn certificate(claim: &str, statement: &str, check: &CertificateCheck) -> Self {
        let mut row = ClaimRow::compare(
            claim,
            statement,
            ClaimKind::Certificate,
            check.achieved_objective,
            check.achieved_objective - check.objective_error.copysign(1.0),
        );
        row.slack = Some(-check.objective_error);
        row.outcome = if check.passed { Outcome::Pass } else { Outcome::Fail };
        row.note = Some(format!(
            "feasibility residual {:.3e}, cone margin {:.3e}, exact identities {}",
            check.feasibility_residual,
            check.cone_margin,
            if check.exact_ok { "hold" } else { "FAIL" }
        ));
        row
    }

    fn without_values(claim: &str, statement: &str, kind: ClaimKind, outcome: Outcome, note: String) -> Self {
        ClaimRow {
            claim: claim.into(),
            statement: statement.into(),
            kind,
            lhs: None,
            rhs: None,
            slack: None,
            outcome,
            note: Some(note),
        }
    }

    fn skipped(claim: &str, statement: &str, kind: ClaimKind, err: &Error) -> Self {
        Self::without_values(claim, statement, kind, Outcome::Skipped, err.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    /// graph6 string when encodable, otherwise `n`/`m` summary.
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub rows: Vec<ClaimRow>,
    /// `[max(1/ω, dnn), 1/2]`, the interval known to contain the copositive
    /// value. No claim is made about where in it the value lies.
    pub copositive_bracket: Option<(f64, f64)>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.outcome != Outcome::Fail)
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.rows.iter().filter(|r| r.outcome == outcome).count()
    }

    pub fn row(&self, claim: &str) -> Option<&ClaimRow> {
        self.rows.iter().find(|r| r.claim == claim)
    }
}

/// Options for [`theorem_report`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub alpha0_tol: f64,
    pub alpha_tilde_tol: f64,
    pub seed: u64,
    pub solver: SolverOptions,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            alpha0_tol: DEFAULT_ALPHA0_TOL,
            alpha_tilde_tol: DEFAULT_ALPHA_TILDE_TOL,
            seed: 0,
            solver: SolverOptions::default(),
        }
    }
}

/// Grid `0, 0.05, ..., 1` used for the eigenvalue bound.
pub fn alpha_grid() -> Vec<f64> {
    (0..=20).map(|k| k as f64 / 20.0).collect()
}

/// Evaluates every bound and certificate on `g`. Failures of a computation
/// mark the rows depending on it as skipped, with the error as note.
pub fn theorem_report(g: &Graph, cfg: &ReportConfig) -> Result<TheoremReport, Error> {
    require_edges(g)?;
    let opts = &cfg.solver;
    let mut rows = Vec::new();
    let a0 = alpha0(g, cfg.alpha0_tol)?.value;
    let mats = matrices(g);
    let gc = complement(g);
    use ClaimKind::*;

    rows.push(ClaimRow::compare("alpha0_at_most_half", "alpha0 <= 1/2", Inequality, a0, 0.5));

    match alpha0_via_dual(g, opts) {
        Ok(v) => rows.push(ClaimRow::compare("strong_duality", "bisection alpha0 = dual program optimum", Equality, a0, v)),
        Err(e) => rows.push(ClaimRow::skipped("strong_duality", "bisection alpha0 = dual program optimum", Equality, &e)),
    }

    let (dl, du) = alpha0_degree_bounds(g)?;
    rows.push(ClaimRow::compare("degree_lower", "-lmin/(Delta - lmin) <= alpha0", Inequality, dl, a0));
    rows.push(ClaimRow::compare("degree_upper", "alpha0 <= -lmin/(delta - lmin)", Inequality, a0, du));
    let regular = "d-regular: alpha0 = -lmin/(d - lmin)";
    match alpha0_closed_regular(g) {
        Ok(v) => rows.push(ClaimRow::compare("regular_closed_form", regular, Equality, a0, v)),
        Err(Error::NotRegular) => rows.push(ClaimRow::without_values(
            "regular_closed_form",
            regular,
            Equality,
            Outcome::NotApplicable,
            "graph is not regular".into(),
        )),
        Err(e) => rows.push(ClaimRow::skipped("regular_closed_form", regular, Equality, &e)),
    }

    let half = "alpha0 = 1/2 iff bipartite";
    if g.is_bipartite() {
        rows.push(ClaimRow::compare("bipartite_half", half, Equality, a0, 0.5));
    } else {
        rows.push(ClaimRow::compare("bipartite_half", half, Strict, a0, 0.5));
    }

    let eig_stmt = "vv^T/(Delta - lmin) is feasible with objective -lmin/(Delta - lmin)";
    match cert_eigvec(g).and_then(|c| Ok((c.check(g)?, c))) {
        Ok((check, cert)) => {
            rows.push(ClaimRow::certificate("eigvec_certificate", eig_stmt, &check));
            let chain = "<X,-A> <= alpha0 <X,L> <= alpha0 at the eigenvector certificate";
            match weak_duality_check(g, &cert.matrix(), a0) {
                Ok(w) => {
                    let mut row = ClaimRow::compare("weak_duality_chain", chain, Inequality, w.v1, w.v3);
                    row.note = Some(format!("chain ({:.9}, {:.9}, {:.9})", w.v1, w.v2, w.v3));
                    if !w.pass {
                        row.outcome = Outcome::Fail;
                    }
                    rows.push(row);
                }
                Err(e) => rows.push(ClaimRow::skipped("weak_duality_chain", chain, Inequality, &e)),
            }
        }
        Err(e) => rows.push(ClaimRow::skipped("eigvec_certificate", eig_stmt, Certificate, &e)),
    }

    let theta_c = lovasz_theta(&gc, opts);
    let lmin_stmt = "lmin(A_a) <= (2m/n)(theta(Gbar) a - 1)/(theta(Gbar) - 1) for a in 0, 0.05, ..., 1";
    let lower_stmt = "alpha0 >= 1/theta(Gbar)";
    let tilde_stmt = "alpha_tilde = 1/theta(Gbar)";
    let sandwich_stmt = "1/theta(Gbar) <= 1/omega";
    match &theta_c {
        Ok(t) => {
            rows.push(ClaimRow::compare(
                "theta_forms_agree",
                "max and min forms of theta(Gbar) agree",
                Equality,
                t.value,
                t.min_form_value,
            ));
            let mut worst: Option<(f64, f64)> = None;
            for a in alpha_grid() {
                let lm = sym_eig(&mats.a_alpha(a))?.lambda_min();
                let b = lambda_min_alpha_bound_with(g, a, t.value)?;
                if worst.is_none_or(|(wl, wb)| b - lm < wb - wl) {
                    worst = Some((lm, b));
                }
            }
            let (lm, b) = worst.expect("grid is nonempty");
            let mut row = ClaimRow::compare("lambda_min_bound", lmin_stmt, Inequality, lm, b);
            row.note = Some("smallest slack over the grid".into());
            rows.push(row);
            rows.push(ClaimRow::compare("theta_lower_bound", lower_stmt, Inequality, 1.0 / t.value, a0));
        }
        Err(e) => {
            rows.push(ClaimRow::skipped("theta_forms_agree", "max and min forms of theta(Gbar) agree", Equality, e));
            rows.push(ClaimRow::skipped("lambda_min_bound", lmin_stmt, Inequality, e));
            rows.push(ClaimRow::skipped("theta_lower_bound", lower_stmt, Inequality, e));
        }
    }

    let cert_stmt = "(theta I + Z - J)/(n(theta - 1)) is feasible for min{<X,A_a>: X psd, tr X = 1} at a = alpha0";
    let tf = build_theta(&gc, ThetaForm::Min);
    match solve_formulation(&tf, opts, "theta min form").and_then(|sol| {
        let (lambda, z) = theta_min_variables(&gc, &tf, &sol);
        let cert = cert_theta_min(g, lambda, &z, a0)?;
        cert.check(g)
    }) {
        Ok(check) => {
            rows.push(ClaimRow::certificate("theta_min_certificate", cert_stmt, &check));
            rows.push(ClaimRow::compare(
                "theta_min_certificate_bound",
                "lmin(A_alpha0) = 0 <= certificate objective",
                Inequality,
                0.0,
                check.achieved_objective,
            ));
        }
        Err(e) => rows.push(ClaimRow::skipped("theta_min_certificate", cert_stmt, Certificate, &e)),
    }

    let at = alpha_tilde(g, cfg.alpha_tilde_tol, opts);
    let inv = inv_theta_value(g, opts);
    match (&at, &theta_c) {
        (Ok(a), Ok(t)) => rows.push(ClaimRow::compare("alpha_tilde_theta", tilde_stmt, Equality, a.value, 1.0 / t.value)),
        (Err(e), _) | (_, Err(e)) => rows.push(ClaimRow::skipped("alpha_tilde_theta", tilde_stmt, Equality, e)),
    }
    let inv_stmt = "alpha_tilde = min{tr X : X o Abar = 0, <J,X> = 1, X psd}";
    match (&at, &inv) {
        (Ok(a), Ok(v)) => rows.push(ClaimRow::compare("alpha_tilde_inv_theta", inv_stmt, Equality, a.value, *v)),
        (Err(e), _) | (_, Err(e)) => rows.push(ClaimRow::skipped("alpha_tilde_inv_theta", inv_stmt, Equality, e)),
    }
    match &at {
        Ok(a) => rows.push(ClaimRow::compare("alpha_tilde_le_alpha0", "alpha_tilde <= alpha0", Inequality, a.value, a0)),
        Err(e) => rows.push(ClaimRow::skipped("alpha_tilde_le_alpha0", "alpha_tilde <= alpha0", Inequality, e)),
    }

    let cut_names = [
        ("maxcut_lower", "1 - |E|/(2M) <= alpha0"),
        ("gw_lower", "1 - |E|/(2M*) <= alpha0"),
        ("maxcut_le_gw", "M <= M*"),
        ("maxcut_upper", "M <= (|E|/2)(delta - lmin)/delta"),
        ("cut_certificate", "xx^T/(4M) is feasible with objective 1 - |E|/(2M)"),
        ("gw_certificate", "X*/(4M*) is feasible with objective 1 - |E|/(2M*)"),
    ];
    match cut_bounds(g, opts) {
        Ok(cb) => {
            let big_m = cb.maxcut.size as f64;
            rows.push(ClaimRow::compare(cut_names[0].0, cut_names[0].1, Inequality, cb.lower_maxcut, a0));
            rows.push(ClaimRow::compare(cut_names[1].0, cut_names[1].1, Inequality, cb.lower_gw, a0));
            rows.push(ClaimRow::compare(cut_names[2].0, cut_names[2].1, Inequality, big_m, cb.gw));
            match cb.maxcut_upper {
                Some(u) => rows.push(ClaimRow::compare(cut_names[3].0, cut_names[3].1, Inequality, big_m, u)),
                None => rows.push(ClaimRow::without_values(
                    cut_names[3].0,
                    cut_names[3].1,
                    Inequality,
                    Outcome::NotApplicable,
                    "minimum degree is 0".into(),
                )),
            }
            match cert_cut(g, &cb.maxcut.side, cb.maxcut.size).and_then(|c| c.check(g)) {
                Ok(check) => rows.push(ClaimRow::certificate(cut_names[4].0, cut_names[4].1, &check)),
                Err(e) => rows.push(ClaimRow::skipped(cut_names[4].0, cut_names[4].1, Certificate, &e)),
            }
            match gw_value(g, opts).and_then(|r| cert_gw(g, &r.x, r.value)).and_then(|c| c.check(g)) {
                Ok(check) => rows.push(ClaimRow::certificate(cut_names[5].0, cut_names[5].1, &check)),
                Err(e) => rows.push(ClaimRow::skipped(cut_names[5].0, cut_names[5].1, Certificate, &e)),
            }
        }
        Err(e) => {
            for (i, (id, st)) in cut_names.iter().enumerate() {
                rows.push(ClaimRow::skipped(id, st, if i >= 4 { Certificate } else { Inequality }, &e));
            }
        }
    }

    let mut bracket = None;
    let cop_names = [
        ("copositive_bracket", "1/omega <= 1/2"),
        ("theta_sandwich", sandwich_stmt),
        ("dnn_lower", "alpha0 <= DNN value"),
        ("dnn_upper", "DNN value <= 1/2"),
        ("motzkin_certificate", "(Abar + I - J/omega)/(2|E|) is copositive-feasible with objective 1/omega"),
    ];
    match copositive_bounds(g, opts) {
        Ok(cb) => {
            rows.push(ClaimRow::compare(cop_names[0].0, cop_names[0].1, Inequality, cb.lower, cb.upper));
            match &theta_c {
                Ok(t) => rows.push(ClaimRow::compare(cop_names[1].0, cop_names[1].1, Inequality, 1.0 / t.value, cb.lower)),
                Err(e) => rows.push(ClaimRow::skipped(cop_names[1].0, cop_names[1].1, Inequality, e)),
            }
            rows.push(ClaimRow::compare(cop_names[2].0, cop_names[2].1, Inequality, a0, cb.dnn));
            rows.push(ClaimRow::compare(cop_names[3].0, cop_names[3].1, Inequality, cb.dnn, 0.5));
            match cert_motzkin(g, cb.omega).and_then(|c| c.check(g)) {
                Ok(check) => rows.push(ClaimRow::certificate(cop_names[4].0, cop_names[4].1, &check)),
                Err(e) => rows.push(ClaimRow::skipped(cop_names[4].0, cop_names[4].1, Certificate, &e)),
            }
            bracket = Some((cb.lower.max(cb.dnn), cb.upper));
        }
        Err(e) => {
            for (i, (id, st)) in cop_names.iter().enumerate() {
                rows.push(ClaimRow::skipped(id, st, if i == 4 { Certificate } else { Inequality }, &e));
            }
        }
    }

    let graph = encode_graph6(g).unwrap_or_else(|_| format!("n={} m={}", g.n(), g.m()));
    Ok(TheoremReport { graph, n: g.n(), m: g.m(), rows, copositive_bracket: bracket })
}

/// Exact maximum cut and its certificate in one call.
pub fn cert_maxcut(g: &Graph) -> Result<DualCertificate, Error> {
    let mc = maxcut_exact(g)?;
    cert_cut(g, &mc.side, mc.size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{named_graph, Family};

    const SQRT5: f64 = 2.23606797749979;

    fn g(f: Family, p: &[usize]) -> Graph {
        named_graph(f, p).unwrap()
    }

    fn passes(c: &DualCertificate, gr: &Graph) -> CertificateCheck {
        let check = c.check(gr).unwrap();
        assert!(check.passed, "{:?} {:?}", c.provenance, check);
        check
    }

    #[test]
    fn eigvec_examples() {
        let k2 = g(Family::Complete, &[2]);
        assert!((passes(&cert_eigvec(&k2).unwrap(), &k2).achieved_objective - 0.5).abs() < 1e-12);
        let c5 = g(Family::Cycle, &[5]);
        assert!((passes(&cert_eigvec(&c5).unwrap(), &c5).achieved_objective - 1.0 / SQRT5).abs() < 1e-9);
        let p3 = g(Family::Path, &[3]);
        let s2 = std::f64::consts::SQRT_2;
        assert!((passes(&cert_eigvec(&p3).unwrap(), &p3).achieved_objective - s2 / (2.0 + s2)).abs() < 1e-12);
    }

    #[test]
    fn cut_examples() {
        let c4 = g(Family::Cycle, &[4]);
        let c = cert_cut(&c4, &[0, 2], 4).unwrap();
        assert_eq!(c.claimed_objective, 0.5);
        assert!(c.exact.iter().all(|e| e.holds));
        passes(&c, &c4);
        let c5 = g(Family::Cycle, &[5]);
        let c = cert_maxcut(&c5).unwrap();
        assert_eq!(c.claimed_objective, 0.375);
        passes(&c, &c5);
        let k2 = g(Family::Complete, &[2]);
        assert_eq!(cert_maxcut(&k2).unwrap().claimed_objective, 0.5);
        assert!(cert_cut(&c5, &[0, 1], 4).is_err());
        assert!(cert_cut(&c5, &[0, 1, 3], 0).is_err());
    }

    #[test]
    fn gw_examples() {
        let opts = SolverOptions::default();
        for (gr, want) in [
            (g(Family::Cycle, &[5]), 1.0 / SQRT5),
            (g(Family::Cycle, &[4]), 0.5),
            (g(Family::Complete, &[3]), 1.0 / 3.0),
        ] {
            let r = gw_value(&gr, &opts).unwrap();
            let c = cert_gw(&gr, &r.x, r.value).unwrap();
            assert!((passes(&c, &gr).achieved_objective - want).abs() < 1e-6);
        }
        let c5 = g(Family::Cycle, &[5]);
        assert!(cert_gw(&c5, &SymMatrix::identity(5).scale(2.0), 4.0).is_err());
    }

    #[test]
    fn theta_min_examples() {
        let opts = SolverOptions::default();
        for (gr, alpha, want) in [
            (g(Family::Cycle, &[5]), 1.0 / SQRT5, 0.0),
            (g(Family::Cycle, &[5]), 0.0, -(1.0 + SQRT5) / 2.0),
            (g(Family::Complete, &[2]), 0.5, 0.0),
        ] {
            let gc = complement(&gr);
            let f = build_theta(&gc, ThetaForm::Min);
            let sol = solve_formulation(&f, &opts, "theta").unwrap();
            let (lambda, z) = theta_min_variables(&gc, &f, &sol);
            let c = cert_theta_min(&gr, lambda, &z, alpha).unwrap();
            assert!((passes(&c, &gr).achieved_objective - want).abs() < 1e-6);
        }
        let c5 = g(Family::Cycle, &[5]);
        let mut bad = SymMatrix::zeros(5);
        bad.set(0, 1, 1.0);
        assert!(cert_theta_min(&c5, SQRT5, &bad, 0.3).is_err());
        assert!(cert_theta_min(&c5, 1.5, &SymMatrix::zeros(5), 0.3).is_err());
    }

    #[test]
    fn motzkin_examples() {
        for (gr, omega, want) in [
            (g(Family::Complete, &[3]), 3, 1.0 / 3.0),
            (g(Family::Cycle, &[5]), 2, 0.5),
            (g(Family::Complete, &[2]), 2, 0.5),
        ] {
            let c = cert_motzkin(&gr, omega).unwrap();
            assert!(c.exact.iter().all(|e| e.holds), "{:?}", c.exact);
            assert_eq!(c.claimed_objective, want);
            let check = passes(&c, &gr);
            assert!(check.cone_margin >= -COPOSITIVE_TOL);
        }
        assert!(cert_motzkin(&g(Family::Cycle, &[5]), 3).is_err());
        assert!(cert_motzkin(&g(Family::Cycle, &[5]), 1).is_err());
    }

    #[test]
    fn copositivity_examples() {
        assert!(copositivity_sample_check(&SymMatrix::identity(3), 100, 0).min_qform > 0.0);
        let y = cert_motzkin(&g(Family::Cycle, &[5]), 2).unwrap().raw;
        assert!(copositivity_sample_check(&y, 10_000, 0).min_qform >= -1e-9);
        let m = SymMatrix::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap();
        let c = copositivity_sample_check(&m, 0, 0);
        assert_eq!(c.min_qform, -0.5);
        assert_eq!(c.argmin, vec![0.5, 0.5]);
    }

    #[test]
    fn pair_minimiser_cases() {
        assert_eq!(pair_minimiser(0.0, -1.0, 0.0), 0.5);
        assert_eq!(pair_minimiser(1.0, 0.0, 2.0), 2.0 / 3.0);
        assert!(pair_minimiser(1.0, 5.0, 1.0) == 0.0 || pair_minimiser(1.0, 5.0, 1.0) == 1.0);
    }

    #[test]
    fn weak_duality_examples() {
        let c5 = g(Family::Cycle, &[5]);
        let a0 = 1.0 / SQRT5;
        let id = cert_scaled_identity(&c5).unwrap();
        passes(&id, &c5);
        let w = weak_duality_check(&c5, &id.matrix(), a0).unwrap();
        assert_eq!(w.v1, 0.0);
        assert!((w.v2 - a0 * 10.0 / 11.0).abs() < 1e-15 && w.pass);
        let w = weak_duality_check(&c5, &cert_maxcut(&c5).unwrap().matrix(), a0).unwrap();
        assert!(w.pass && (w.v1 - 0.375).abs() < 1e-12);
        let w = weak_duality_check(&c5, &cert_eigvec(&c5).unwrap().matrix(), a0).unwrap();
        assert!(w.pass && (w.v1 - w.v3).abs() < 1e-9);
        assert!(weak_duality_check(&c5, &SymMatrix::identity(5), a0).is_err());
    }

    #[test]
    fn report_on_c5() {
        let r = theorem_report(&g(Family::Cycle, &[5]), &ReportConfig::default()).unwrap();
        for row in &r.rows {
            assert_ne!(row.outcome, Outcome::Fail, "{row:?}");
            assert_ne!(row.outcome, Outcome::Skipped, "{row:?}");
        }
        assert!(r.row("theta_lower_bound").unwrap().slack.unwrap().abs() <= 1e-6);
        assert!(r.row("gw_lower").unwrap().slack.unwrap().abs() <= 1e-6);
        let (lo, hi) = r.copositive_bracket.unwrap();
        assert_eq!((lo, hi), (0.5, 0.5));
        assert_eq!(r.graph, "Dhc");
    }
}
