//! Acceptance criteria over the fixed corpus. Each criterion is a separate
//! test that prints one `PASS`/`FAIL` line with its worst observed margin.

use alphatheta::formulations::{build_alpha_tilde_feas, build_theta, ThetaForm};
use alphatheta::graph::{complement, matrices, named_graph, Family};
use alphatheta::linalg::{sym_eig, SymMatrix};
use alphatheta::parameters::{
    alpha0, alpha0_closed_regular, alpha0_via_dual, alpha_tilde, clique_number, copositive_bounds, cut_bounds,
    inv_theta_value, lambda_min_alpha_bound_with, lovasz_theta, DEFAULT_ALPHA0_TOL, DEFAULT_ALPHA_TILDE_TOL,
};
use alphatheta::sdp::{kkt_residuals, meets_invariants, solve, Sense};
use alphatheta::verify::{
    alpha_grid, cert_gw, cert_maxcut, cert_motzkin, cert_theta_min, copositivity_sample_check, theorem_report,
    Outcome, ReportConfig,
};
use alphatheta::{Graph, SolverOptions};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SQRT5: f64 = 2.23606797749979;

fn corpus() -> Vec<(&'static str, Graph)> {
    let g = |f, p: &[usize]| named_graph(f, p).unwrap();
    vec![
        ("K2", g(Family::Complete, &[2])),
        ("K3", g(Family::Complete, &[3])),
        ("K4", g(Family::Complete, &[4])),
        ("C4", g(Family::Cycle, &[4])),
        ("C5", g(Family::Cycle, &[5])),
        ("P3", g(Family::Path, &[3])),
        ("K2,3", g(Family::CompleteBipartite, &[2, 3])),
        ("Petersen", g(Family::Petersen, &[])),
    ]
}

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn a0(g: &Graph) -> f64 {
    alpha0(g, DEFAULT_ALPHA0_TOL).unwrap().value
}

fn theta_c(g: &Graph) -> f64 {
    lovasz_theta(&complement(g), &opts()).unwrap().value
}

/// Collects failures and prints a single verdict line.
struct Criterion {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
    worst: f64,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Criterion { id, title, failures: Vec::new(), worst: 0.0 }
    }

    /// Records `|got − want| <= tol`.
    fn close(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let err = (got - want).abs();
        self.worst = self.worst.max(err / tol);
        if !(err <= tol) {
            self.failures.push(format!("{what}: got {got}, want {want} within {tol:e}"));
        }
    }

    /// Records `lhs <= rhs + tol`.
    fn le(&mut self, what: &str, lhs: f64, rhs: f64, tol: f64) {
        if !(lhs <= rhs + tol) {
            self.failures.push(format!("{what}: {lhs} > {rhs} + {tol:e}"));
        }
    }

    fn check(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn finish(self) {
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {}: {} (worst error / tolerance = {:.3})",
            self.id, verdict, self.title, self.worst
        );
        for f in &self.failures {
            println!("    {f}");
        }
        assert!(self.failures.is_empty(), "criterion {} failed", self.id);
    }
}

#[test]
fn criterion_01_regular_closed_form() {
    let mut c = Criterion::new(1, "bisection alpha0 equals -lmin/(d - lmin) on regular graphs");
    let want = [("K2", 0.5), ("K3", 1.0 / 3.0), ("K4", 0.25), ("C4", 0.5), ("C5", 1.0 / SQRT5), ("Petersen", 0.4)];
    for (name, g) in corpus() {
        if g.regular_degree().is_none() {
            continue;
        }
        let v = a0(&g);
        c.close(name, v, alpha0_closed_regular(&g).unwrap(), 1e-7);
        if let Some(&(_, w)) = want.iter().find(|(n, _)| *n == name) {
            c.close(name, v, w, 1e-7);
        }
    }
    c.finish();
}

#[test]
fn criterion_02_strong_duality() {
    let mut c = Criterion::new(2, "dual program optimum equals bisection alpha0");
    for (name, g) in corpus() {
        c.close(name, alpha0_via_dual(&g, &opts()).unwrap(), a0(&g), 1e-5);
    }
    c.finish();
}

#[test]
fn criterion_03_eigenvalue_bound() {
    let mut c = Criterion::new(3, "lmin(A_a) <= (2m/n)(theta a - 1)/(theta - 1) on the grid; tight for C5");
    for (name, g) in corpus() {
        let t = theta_c(&g);
        let mats = matrices(&g);
        for a in alpha_grid() {
            let lm = sym_eig(&mats.a_alpha(a)).unwrap().lambda_min();
            let b = lambda_min_alpha_bound_with(&g, a, t).unwrap();
            c.le(&format!("{name} at a = {a}"), lm, b, 1e-6);
        }
    }
    let c5 = named_graph(Family::Cycle, &[5]).unwrap();
    let t = theta_c(&c5);
    let mats = matrices(&c5);
    for a in [0.0, a0(&c5)] {
        let lm = sym_eig(&mats.a_alpha(a)).unwrap().lambda_min();
        let b = lambda_min_alpha_bound_with(&c5, a, t).unwrap();
        c.close(&format!("C5 tightness at a = {a}"), b - lm, 0.0, 1e-5);
    }
    c.finish();
}

#[test]
fn criterion_04_theta_lower_bound() {
    let mut c = Criterion::new(4, "alpha0 >= 1/theta(Gbar); equality for K_n, C5, Petersen");
    for (name, g) in corpus() {
        let (v, inv) = (a0(&g), 1.0 / theta_c(&g));
        c.le(name, inv, v, 1e-6);
        if ["K2", "K3", "K4", "C5", "Petersen"].contains(&name) {
            c.close(&format!("{name} equality"), v, inv, 1e-5);
        }
    }
    c.finish();
}

#[test]
fn criterion_05_weighted_threshold() {
    let mut c = Criterion::new(5, "alpha_tilde equals 1/theta(Gbar) and the inverse theta program");
    for (name, g) in corpus() {
        let at = alpha_tilde(&g, DEFAULT_ALPHA_TILDE_TOL, &opts()).unwrap().value;
        c.close(&format!("{name} vs 1/theta"), at, 1.0 / theta_c(&g), 1e-4);
        c.close(&format!("{name} vs inverse program"), at, inv_theta_value(&g, &opts()).unwrap(), 1e-4);
    }
    c.finish();
}

#[test]
fn criterion_06_bipartite_characterisation() {
    let mut c = Criterion::new(6, "alpha0 = 1/2 exactly for the bipartite corpus graphs");
    for (name, g) in corpus() {
        let at_half = (a0(&g) - 0.5).abs() <= 1e-7;
        let expected = ["K2", "C4", "P3", "K2,3"].contains(&name);
        c.check(&format!("{name}: alpha0 = 1/2 is {at_half}, expected {expected}"), at_half == expected);
        c.check(&format!("{name}: 2-colouring disagrees"), g.is_bipartite() == expected);
    }
    c.finish();
}

#[test]
fn criterion_07_cut_bounds() {
    let mut c = Criterion::new(7, "1 - |E|/2M <= 1 - |E|/2M* <= alpha0 and M <= (|E|/2)(delta - lmin)/delta");
    for (name, g) in corpus() {
        let cb = cut_bounds(&g, &opts()).unwrap();
        let v = a0(&g);
        c.le(&format!("{name} maxcut <= gw bound"), cb.lower_maxcut, cb.lower_gw, 1e-6);
        c.le(&format!("{name} gw bound <= alpha0"), cb.lower_gw, v, 1e-6);
        c.le(&format!("{name} M <= upper"), cb.maxcut.size as f64, cb.maxcut_upper.unwrap(), 1e-9);
        let cut = cert_maxcut(&g).unwrap().check(&g).unwrap();
        c.check(&format!("{name} cut certificate"), cut.passed);
        let gw = alphatheta::parameters::gw_value(&g, &opts()).unwrap();
        let gwc = cert_gw(&g, &gw.x, gw.value).unwrap().check(&g).unwrap();
        c.check(&format!("{name} relaxation certificate"), gwc.passed);
        c.le(&format!("{name} cut objective <= relaxation objective"), cut.achieved_objective, gwc.achieved_objective, 1e-9);
        match name {
            "C5" => {
                c.close("C5 gw tight", cb.lower_gw, v, 1e-5);
                c.close("C5 gw value", cb.lower_gw, 0.447214, 1e-6);
            }
            "C4" => c.close("C4 gw bound", cb.lower_gw, 0.5, 1e-5),
            _ => {}
        }
    }
    c.finish();
}

#[test]
fn criterion_08_copositive_bracket() {
    let mut c = Criterion::new(8, "clique certificate is feasible with objective 1/omega; 1/omega <= 1/2");
    for (name, g) in corpus() {
        let omega = clique_number(&g).unwrap();
        let cert = cert_motzkin(&g, omega).unwrap();
        c.check(&format!("{name} exact identities {:?}", cert.exact), cert.exact.iter().all(|e| e.holds));
        let on_l = cert.exact.iter().find(|e| e.statement.starts_with("<L, Y>")).unwrap();
        c.check(&format!("{name} <L,Y> = 2|E|"), on_l.lhs == (2 * g.m()).to_string());
        let scaled = on_l.lhs.parse::<Rational64>().unwrap() / Rational64::from_integer(2 * g.m() as i64);
        c.check(&format!("{name} <L,X> = {scaled} after scaling"), scaled == Rational64::from_integer(1));
        let q = copositivity_sample_check(&cert.raw, 20_000, 0);
        c.le(&format!("{name} sampled copositivity"), -1e-9, q.min_qform, 0.0);
        let check = cert.check(&g).unwrap();
        c.check(&format!("{name} certificate check {check:?}"), check.passed);
        c.close(&format!("{name} objective"), check.achieved_objective, 1.0 / omega as f64, 1e-12);
        let b = copositive_bounds(&g, &opts()).unwrap();
        c.le(&format!("{name} bracket"), b.lower, b.upper, 0.0);
    }
    let c5 = named_graph(Family::Cycle, &[5]).unwrap();
    let b = copositive_bounds(&c5, &opts()).unwrap();
    c.check("C5 bracket collapses to 1/2", b.lower == 0.5 && b.upper == 0.5);
    let v = a0(&c5);
    c.check(&format!("C5 alpha0 = {v} < 1/omega"), v < b.lower - 1e-3);
    c.finish();
}

#[test]
fn criterion_09_solver_sanity() {
    let mut c = Criterion::new(9, "theta of empty, complete and C5 graphs; forms agree; residuals in bounds");
    for n in 1..=6 {
        let e = Graph::empty(n).unwrap();
        c.close(&format!("theta(empty {n})"), lovasz_theta(&e, &opts()).unwrap().value, n as f64, 1e-5);
        let k = named_graph(Family::Complete, &[n]).unwrap();
        c.close(&format!("theta(K{n})"), lovasz_theta(&k, &opts()).unwrap().value, 1.0, 1e-5);
    }
    let c5 = named_graph(Family::Cycle, &[5]).unwrap();
    c.close("theta(C5)", lovasz_theta(&c5, &opts()).unwrap().value, SQRT5, 1e-5);
    for (name, g) in corpus() {
        for gr in [g.clone(), complement(&g)] {
            let mut vals = Vec::new();
            for form in [ThetaForm::Max, ThetaForm::Min] {
                let f = build_theta(&gr, form);
                let sol = solve(&f.problem, &opts()).unwrap();
                let r = kkt_residuals(&f.problem, &sol).unwrap();
                c.check(&format!("{name} {form:?}: status {:?}", sol.status), sol.is_optimal());
                c.check(&format!("{name} {form:?}: residuals {r:?}"), meets_invariants(&sol));
                vals.push(sol.primal_obj);
            }
            c.close(&format!("{name} forms agree"), vals[0], vals[1], 1e-5);
        }
    }
    c.finish();
}

#[test]
fn criterion_10_property_suites() {
    let mut c = Criterion::new(10, "eigensolver, solver iterates, weighted feasibility interval, certificates, report");
    // Random symmetric matrices: reconstruction and orthogonality.
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..1000 {
        let n = rng.random_range(1..=30);
        let m = SymMatrix::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let spectrum = sym_eig(&m).unwrap();
        let mut diff = spectrum.reconstruct();
        diff.axpy(-1.0, &m);
        let tol = 1e-10 * m.frobenius_norm().max(1.0);
        c.close(&format!("case {case} (n = {n}) reconstruction"), diff.frobenius_norm(), 0.0, tol);
        c.close(&format!("case {case} (n = {n}) orthogonality"), spectrum.orthogonality_error(), 0.0, 1e-10);
    }
    // Solver iterates: duality-gap identity and essentially monotone gap.
    for (name, g) in corpus() {
        for (label, g) in [("", g.clone()), (" complement", complement(&g))] {
            for form in [ThetaForm::Max, ThetaForm::Min] {
                let f = build_theta(&g, form);
                let sol = solve(&f.problem, &opts()).unwrap();
                let sgn = match f.problem.sense {
                    Sense::Minimize => 1.0,
                    Sense::Maximize => -1.0,
                };
                let mut rises = 0;
                for (k, rec) in sol.history.iter().enumerate() {
                    let diff = sgn * (rec.primal_obj - rec.dual_obj);
                    let scale = 1.0 + rec.primal_obj.abs() + rec.dual_obj.abs() + rec.gap.abs();
                    c.close(
                        &format!("{name}{label} {form:?} iterate {k}: pobj - dobj = gap + infeasibility"),
                        diff,
                        rec.gap + rec.infeasibility_term,
                        1e-9 * scale,
                    );
                    c.check(&format!("{name}{label} {form:?} iterate {k}: negative gap {}", rec.gap), rec.gap >= 0.0);
                    if rec.primal_infeas <= 1e-8 && rec.dual_infeas <= 1e-8 {
                        c.le(&format!("{name}{label} {form:?} iterate {k}: weak duality"), -diff, 0.0, 1e-8 * scale);
                    }
                    if k > 0 && rec.gap > sol.history[k - 1].gap {
                        rises += 1;
                    }
                }
                let steps = sol.history.len().saturating_sub(1).max(1);
                c.le(&format!("{name}{label} {form:?}: {rises} gap increases in {steps} steps"), rises as f64, 0.05 * steps as f64, 0.0);
            }
        }
    }
    // Interval property: on a grid, the feasible set {t* >= 0} is an interval.
    for (name, g) in corpus() {
        let grid: Vec<f64> = (1..20).map(|k| k as f64 * 0.05).collect();
        let feasible: Vec<bool> = grid
            .iter()
            .map(|&a| {
                let f = build_alpha_tilde_feas(&g, a).unwrap();
                solve(&f.problem, &opts()).unwrap().primal_obj >= -1e-8
            })
            .collect();
        let first = feasible.iter().position(|&f| f);
        let last = feasible.iter().rposition(|&f| f);
        if let (Some(i), Some(j)) = (first, last) {
            c.check(&format!("{name}: feasible set on the grid has a gap"), feasible[i..=j].iter().all(|&f| f));
        } else {
            c.check(&format!("{name}: no feasible grid point"), false);
        }
    }
    // Certificates: feasibility and objective within 1e-7 on every corpus graph.
    for (name, g) in corpus() {
        let v = a0(&g);
        let gc = complement(&g);
        let tf = build_theta(&gc, ThetaForm::Min);
        let sol = solve(&tf.problem, &opts()).unwrap();
        let (lambda, z) = alphatheta::formulations::theta_min_variables(&gc, &tf, &sol);
        let tm = cert_theta_min(&g, lambda, &z, v).unwrap().check(&g).unwrap();
        c.check(&format!("{name} theta-min certificate {tm:?}"), tm.passed);
        c.le(&format!("{name} lmin(A_alpha0) <= certificate objective"), 0.0, tm.achieved_objective, 1e-6);
        c.close(&format!("{name} certificate objective at alpha0"), tm.achieved_objective, 0.0, 1e-6);
        let y = cert_motzkin(&g, clique_number(&g).unwrap()).unwrap();
        let q = copositivity_sample_check(&y.raw, 20_000, 1);
        c.le(&format!("{name} copositivity of Y"), -1e-9, q.min_qform, 0.0);
        let eig = alphatheta::verify::cert_eigvec(&g).unwrap().check(&g).unwrap();
        c.check(&format!("{name} eigenvector certificate {eig:?}"), eig.passed);
        let id = alphatheta::verify::cert_scaled_identity(&g).unwrap();
        c.check(&format!("{name} scaled identity"), id.check(&g).unwrap().passed);
        c.check(&format!("{name} scaled identity is interior"), id.matrix().get(0, 0) > 0.0);
    }
    // The full report passes on every corpus graph.
    for (name, g) in corpus() {
        let r = theorem_report(&g, &ReportConfig::default()).unwrap();
        for row in &r.rows {
            c.check(&format!("{name} {}: {:?}", row.claim, row.outcome), row.outcome != Outcome::Fail && row.outcome != Outcome::Skipped);
        }
    }
    c.finish();
}
