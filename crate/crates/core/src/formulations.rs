//! Builders that turn each graph program into a block standard-form
//! [`SdpProblem`], plus the maps from solver output back to the program's
//! own variables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{matrices, Graph};
use crate::linalg::SymMatrix;
use crate::sdp::{BlockMatrix, SdpProblem, SdpSolution, Sense};
use crate::Error;

/// Which program a problem or certificate belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "alpha", rename_all = "snake_case")]
pub enum FormulationKind {
    /// `sup{⟨X,−A⟩ : X ⪰ 0, ⟨X,L⟩ <= 1}`, whose value is α₀.
    Alpha0Dual,
    ThetaMax,
    ThetaMin,
    /// Renormalised theta program whose value is `1/ϑ(Ḡ)`.
    InvTheta,
    /// Max-cut relaxation with unit diagonal.
    Gw,
    /// Weighted-α feasibility at a fixed α.
    AlphaTildeFeas(f64),
    /// Inner PSD + nonnegative approximation of the copositive program.
    DnnCopositive,
    /// `min{⟨X, A_α⟩ : X ⪰ 0, tr X = 1}`, whose value is `λ_min(A_α)`.
    MinEigenDual(f64),
    /// `sup{⟨X,−A⟩ : X copositive, ⟨X,L⟩ <= 1}` (not solved, only used to
    /// label certificates).
    Copositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormulationTag {
    pub kind: FormulationKind,
    /// The program written out in plain notation.
    pub statement: &'static str,
}

/// Deserialised form of a tag; the statement is rebuilt from the kind.
#[derive(Deserialize)]
struct TagRepr {
    kind: FormulationKind,
}

impl<'de> Deserialize<'de> for FormulationTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(FormulationTag::new(TagRepr::deserialize(d)?.kind))
    }
}

impl FormulationTag {
    pub fn new(kind: FormulationKind) -> Self {
        let statement = match kind {
            FormulationKind::Alpha0Dual => "alpha0 = sup{<X,-A> : X psd, <X,L> <= 1}",
            FormulationKind::ThetaMax => "theta(G) = max{<X,J> : X o A = 0, <X,I> = 1, X psd}",
            FormulationKind::ThetaMin => "theta(G) = min{l : l I + Z - J psd, Z o (I + Abar) = 0}",
            FormulationKind::InvTheta => "1/theta(Gbar) = min{<X,I> : X o Abar = 0, <X,J> = 1, X psd}",
            FormulationKind::Gw => "M* = max{<L/4, X> : X_ii = 1, X psd}",
            FormulationKind::AlphaTildeFeas(_) => {
                "max t : a Y + (1-a) Z - t I psd, Y diagonal, Z supported on E, <J,Y> = 1, <J,Y-Z> = 0"
            }
            FormulationKind::DnnCopositive => "max{<P+N,-A> : P psd, N >= 0, <P+N,L> <= 1}",
            FormulationKind::MinEigenDual(_) => "lambda_min(A_a) = min{<X,A_a> : X psd, <X,I> = 1}",
            FormulationKind::Copositive => "alpha0^C = sup{<X,-A> : X copositive, <X,L> <= 1}",
        };
        FormulationTag { kind, statement }
    }
}

impl fmt::Display for FormulationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.statement)
    }
}

/// A built program together with its tag and the vertex subset it lives on.
#[derive(Debug, Clone)]
pub struct Formulation {
    pub tag: FormulationTag,
    pub problem: SdpProblem,
    /// Graph vertices indexing the main matrix block, in order. Programs
    /// that drop isolated vertices use a proper subset.
    pub support: Vec<usize>,
    /// Vertex count of the source graph.
    pub n: usize,
}

impl Formulation {
    /// Main (first) matrix block of the primal solution, scattered back to
    /// `n x n` coordinates.
    pub fn primal_matrix(&self, sol: &SdpSolution) -> SymMatrix {
        sol.x.block(0).embed(self.n, &self.support)
    }

    /// Debug dump with the program statement in the header.
    pub fn write_debug(&self) -> String {
        self.problem.write_debug(&[self.tag.statement.to_string()])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaForm {
    Max,
    Min,
}

/// `(e_u e_vᵀ + e_v e_uᵀ)/2` in block 0, or `e_u e_uᵀ` when `u == v`.
fn entry_selector(dims: &[usize], u: usize, v: usize) -> BlockMatrix {
    let mut a = BlockMatrix::zeros(dims);
    a.set(0, u, v, if u == v { 1.0 } else { 0.5 });
    a
}

fn require_edges(g: &Graph) -> Result<(), Error> {
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    Ok(())
}

/// Program for α₀ in its matrix form: maximise `⟨X, −A⟩` subject to
/// `⟨X, L⟩ + s = 1` with a scalar slack `s >= 0`.
///
/// Isolated vertices contribute nothing to either `A` or `L`, so the matrix
/// block is restricted to the non-isolated vertices; this keeps the dual
/// strictly feasible.
pub fn build_alpha0_dual(g: &Graph) -> Result<Formulation, Error> {
    require_edges(g)?;
    let support = g.non_isolated();
    let sub = g.induced(&support)?;
    let mats = matrices(&sub);
    let k = sub.n();
    let dims = vec![k, 1];
    let mut p = SdpProblem::new(dims.clone(), Sense::Maximize);
    *p.c.block_mut(0) = mats.a.to_sym().scale(-1.0);
    let mut a = BlockMatrix::zeros(&dims);
    *a.block_mut(0) = mats.l.to_sym();
    a.set(1, 0, 0, 1.0);
    p.add_constraint(a, 1.0);
    Ok(Formulation { tag: FormulationTag::new(FormulationKind::Alpha0Dual), problem: p, support, n: g.n() })
}

/// Theta program of `g`.
///
/// The max form is the usual `max ⟨X, J⟩` over unit-trace PSD matrices
/// vanishing on edges. The min form is written in the variable
/// `W = λI + Z − J ⪰ 0`: `Z` is free on the edges of `g` and zero
/// elsewhere, so `W` has equal diagonal entries `λ − 1`, entries `−1` on
/// non-edges and free entries on edges. Its objective is
/// `λ = tr(W)/n + 1`.
pub fn build_theta(g: &Graph, form: ThetaForm) -> Formulation {
    let n = g.n();
    let dims = vec![n];
    let support: Vec<usize> = (0..n).collect();
    match form {
        ThetaForm::Max => {
            let mut p = SdpProblem::new(dims.clone(), Sense::Maximize);
            *p.c.block_mut(0) = SymMatrix::ones(n);
            for &(u, v) in g.edges() {
                p.add_constraint(entry_selector(&dims, u, v), 0.0);
            }
            p.add_constraint(BlockMatrix::identity(&dims), 1.0);
            Formulation { tag: FormulationTag::new(FormulationKind::ThetaMax), problem: p, support, n }
        }
        ThetaForm::Min => {
            let mut p = SdpProblem::new(dims.clone(), Sense::Minimize);
            *p.c.block_mut(0) = SymMatrix::identity(n).scale(1.0 / n as f64);
            p.offset = 1.0;
            for i in 1..n {
                let mut a = BlockMatrix::zeros(&dims);
                a.set(0, i, i, 1.0);
                a.set(0, 0, 0, -1.0);
                p.add_constraint(a, 0.0);
            }
            for v in 1..n {
                for u in 0..v {
                    if !g.has_edge(u, v) {
                        p.add_constraint(entry_selector(&dims, u, v), -1.0);
                    }
                }
            }
            Formulation { tag: FormulationTag::new(FormulationKind::ThetaMin), problem: p, support, n }
        }
    }
}

/// `(λ, Z)` recovered from a solved min-form theta program. `Z` is
/// projected onto its support (edges of the graph) so the structural
/// constraint holds exactly.
pub fn theta_min_variables(g: &Graph, f: &Formulation, sol: &SdpSolution) -> (f64, SymMatrix) {
    assert_eq!(f.tag.kind, FormulationKind::ThetaMin);
    let n = g.n();
    let w = sol.x.block(0);
    let lambda = sol.primal_obj;
    let mut z = SymMatrix::zeros(n);
    for &(u, v) in g.edges() {
        z.set(u, v, w.get(u, v) + 1.0);
    }
    (lambda, z)
}

/// `min tr X` over PSD `X` with `⟨X, J⟩ = 1` that vanish on the non-edges
/// of `g`; the optimum is `1/ϑ(Ḡ)`.
pub fn build_inv_theta(g: &Graph) -> Formulation {
    let n = g.n();
    let dims = vec![n];
    let mut p = SdpProblem::new(dims.clone(), Sense::Minimize);
    *p.c.block_mut(0) = SymMatrix::identity(n);
    for v in 1..n {
        for u in 0..v {
            if !g.has_edge(u, v) {
                p.add_constraint(entry_selector(&dims, u, v), 0.0);
            }
        }
    }
    let mut a = BlockMatrix::zeros(&dims);
    *a.block_mut(0) = SymMatrix::ones(n);
    p.add_constraint(a, 1.0);
    Formulation { tag: FormulationTag::new(FormulationKind::InvTheta), problem: p, support: (0..n).collect(), n }
}

/// Max-cut relaxation `max ⟨L/4, X⟩` with `X_ii = 1`.
pub fn build_gw(g: &Graph) -> Formulation {
    let n = g.n();
    let dims = vec![n];
    let mut p = SdpProblem::new(dims.clone(), Sense::Maximize);
    *p.c.block_mut(0) = matrices(g).l.to_sym().scale(0.25);
    for i in 0..n {
        p.add_constraint(entry_selector(&dims, i, i), 1.0);
    }
    Formulation { tag: FormulationTag::new(FormulationKind::Gw), problem: p, support: (0..n).collect(), n }
}

/// Auxiliary program for the weighted threshold at a fixed `alpha`:
/// maximise `t` subject to `αY + (1−α)Z − tI ⪰ 0`, `Y` diagonal, `Z`
/// supported on edges, `⟨J,Y⟩ = 1`, `⟨J,Y−Z⟩ = 0`. The constraints are
/// feasible at `alpha` iff the optimum `t*` is nonnegative.
///
/// The free variables are eliminated rather than split. With
/// `W = αY + (1−α)Z − tI ⪰ 0` as the only cone variable, `Y` and `Z` are
/// read off `W` (diagonal and edge entries), `W` must vanish on non-edges,
/// `⟨J,Y⟩ = 1` becomes `tr W + n t = α`, and `⟨J,Y−Z⟩ = 0` becomes
/// `⟨J − I, W⟩ = 1 − α`. Hence `t = (α − tr W)/n` is maximised by
/// minimising `tr W`.
pub fn build_alpha_tilde_feas(g: &Graph, alpha: f64) -> Result<Formulation, Error> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {}", alpha)));
    }
    require_edges(g)?;
    let n = g.n();
    let dims = vec![n];
    let mut p = SdpProblem::new(dims.clone(), Sense::Maximize);
    *p.c.block_mut(0) = SymMatrix::identity(n).scale(-1.0 / n as f64);
    p.offset = alpha / n as f64;
    for v in 1..n {
        for u in 0..v {
            if !g.has_edge(u, v) {
                p.add_constraint(entry_selector(&dims, u, v), 0.0);
            }
        }
    }
    let mut a = BlockMatrix::zeros(&dims);
    *a.block_mut(0) = &SymMatrix::ones(n) - &SymMatrix::identity(n);
    p.add_constraint(a, 1.0 - alpha);
    Ok(Formulation {
        tag: FormulationTag::new(FormulationKind::AlphaTildeFeas(alpha)),
        problem: p,
        support: (0..n).collect(),
        n,
    })
}

/// The weighted-threshold variables `(t, Y, Z)` recovered from a solved
/// feasibility program.
#[derive(Debug, Clone)]
pub struct AlphaTildePoint {
    pub alpha: f64,
    pub t: f64,
    /// Diagonal of `Y`.
    pub y: Vec<f64>,
    pub z: SymMatrix,
}

impl AlphaTildePoint {
    pub fn from_solution(g: &Graph, f: &Formulation, sol: &SdpSolution) -> Self {
        let FormulationKind::AlphaTildeFeas(alpha) = f.tag.kind else {
            panic!("not an alpha-tilde feasibility formulation");
        };
        let w = sol.x.block(0);
        let t = sol.primal_obj;
        let y = (0..g.n()).map(|i| (w.get(i, i) + t) / alpha).collect();
        let mut z = SymMatrix::zeros(g.n());
        for &(u, v) in g.edges() {
            z.set(u, v, w.get(u, v) / (1.0 - alpha));
        }
        AlphaTildePoint { alpha, t, y, z }
    }

    /// `αY + (1−α)Z − tI`.
    pub fn slack_matrix(&self) -> SymMatrix {
        let mut w = self.z.scale(1.0 - self.alpha);
        for (i, &yi) in self.y.iter().enumerate() {
            w.set(i, i, self.alpha * yi - self.t);
        }
        w
    }

    /// `(⟨J, Y⟩ − 1, ⟨J, Y − Z⟩)`, both zero for a feasible point.
    pub fn normalisation_residuals(&self) -> (f64, f64) {
        let sy: f64 = self.y.iter().sum();
        (sy - 1.0, sy - self.z.sum())
    }
}

/// Doubly-nonnegative inner approximation of the copositive program:
/// maximise `⟨P + N, −A⟩` subject to `⟨P + N, L⟩ + s = 1`, `P ⪰ 0`,
/// `N >= 0` entrywise, `s >= 0`.
///
/// Blocks are `[P, s, N_ii.., N_uv..]` with one scalar block per diagonal
/// entry of `N` and per edge `uv`. Off-diagonal entries of `N` on non-edges
/// appear in neither the objective nor the constraint and are omitted.
/// Isolated vertices are dropped as in [`build_alpha0_dual`].
pub fn build_dnn_copositive(g: &Graph) -> Result<Formulation, Error> {
    require_edges(g)?;
    let support = g.non_isolated();
    let sub = g.induced(&support)?;
    let mats = matrices(&sub);
    let k = sub.n();
    let mut dims = vec![k, 1];
    dims.extend(std::iter::repeat_n(1, k + sub.m()));
    let mut p = SdpProblem::new(dims.clone(), Sense::Maximize);
    *p.c.block_mut(0) = mats.a.to_sym().scale(-1.0);
    let mut a = BlockMatrix::zeros(&dims);
    *a.block_mut(0) = mats.l.to_sym();
    a.set(1, 0, 0, 1.0);
    for i in 0..k {
        a.set(2 + i, 0, 0, mats.d.get(i, i) as f64);
    }
    for e in 0..sub.m() {
        // N_uv = N_vu both enter: coefficient 2·(−1) in each inner product
        p.c.set(2 + k + e, 0, 0, -2.0);
        a.set(2 + k + e, 0, 0, -2.0);
    }
    p.add_constraint(a, 1.0);
    Ok(Formulation { tag: FormulationTag::new(FormulationKind::DnnCopositive), problem: p, support, n: g.n() })
}

/// `(P, N)` of a solved DNN program in `n x n` coordinates.
pub fn dnn_parts(g: &Graph, f: &Formulation, sol: &SdpSolution) -> (SymMatrix, SymMatrix) {
    assert_eq!(f.tag.kind, FormulationKind::DnnCopositive);
    let sub = g.induced(&f.support).expect("support is a vertex subset");
    let k = sub.n();
    let p = f.primal_matrix(sol);
    let mut nn = SymMatrix::zeros(k);
    for i in 0..k {
        nn.set(i, i, sol.x.block(2 + i).get(0, 0));
    }
    for (e, &(u, v)) in sub.edges().iter().enumerate() {
        nn.set(u, v, sol.x.block(2 + k + e).get(0, 0));
    }
    (p, nn.embed(g.n(), &f.support))
}
