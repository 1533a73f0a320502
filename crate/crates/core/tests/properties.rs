use alphatheta::formulations::{build_alpha0_dual, build_alpha_tilde_feas, build_dnn_copositive, build_gw, build_inv_theta, build_theta, ThetaForm};
use alphatheta::graph::{complement, encode_graph6, matrices, parse_graph6, IntMatrix};
use alphatheta::linalg::sym_eig;
use alphatheta::parameters::{
    alpha0, alpha0_degree_bounds, alpha0_via_dual, alpha_tilde, clique_number, cut_bounds, lambda_min_alpha_bound_with,
    lovasz_theta, maxcut_exact, solve_formulation, DEFAULT_ALPHA0_TOL, DEFAULT_ALPHA_TILDE_TOL,
};
use alphatheta::sdp::{solve, Sense};
use alphatheta::verify::{alpha_grid, cert_cut, cert_gw, cert_maxcut, cert_motzkin, cert_scaled_identity, copositivity_sample_check};
use alphatheta::{Graph, SolverOptions};
use proptest::prelude::*;

/// Random graph on 1..=max_n vertices from an edge-inclusion bitmask.
fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>()).prop_map(|(n, bits)| {
        let mut edges = Vec::new();
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if bits >> (k % 64) & 1 == 1 {
                    edges.push((u, v));
                }
                k += 1;
            }
        }
        Graph::new(n, edges).unwrap()
    })
}

fn graph_with_edge(max_n: usize) -> impl Strategy<Value = Graph> {
    graph(max_n).prop_filter("needs an edge", |g| g.m() > 0)
}

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn theta_c(g: &Graph) -> f64 {
    lovasz_theta(&complement(g), &opts()).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_identities_are_exact(g in graph(12)) {
        let n = g.n();
        let mats = matrices(&g);
        let sum = &(&mats.a + &mats.abar) + &IntMatrix::identity(n);
        prop_assert_eq!(sum, IntMatrix::ones(n));
        for (i, d) in g.degrees().into_iter().enumerate() {
            prop_assert_eq!(mats.d.get(i, i), d as i64);
        }
        prop_assert_eq!(IntMatrix::ones(n).inner(&mats.l), 0);
        prop_assert!(mats.a.is_symmetric() && mats.l.is_symmetric());
    }

    #[test]
    fn complement_is_an_involution(g in graph(12)) {
        prop_assert_eq!(complement(&complement(&g)), g);
    }

    #[test]
    fn graph6_round_trip(g in graph(12)) {
        let text = encode_graph6(&g).unwrap();
        prop_assert_eq!(parse_graph6(&text).unwrap(), g);
    }

    #[test]
    fn exact_maxcut_certificate_holds(g in graph_with_edge(9)) {
        let cut = maxcut_exact(&g).unwrap();
        let cert = cert_cut(&g, &cut.side, cut.size).unwrap().check(&g).unwrap();
        prop_assert!(cert.passed, "{:?}", cert);
        prop_assert!(cert.exact_ok);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn builders_are_well_formed(g in graph_with_edge(6)) {
        let gc = complement(&g);
        let mut built = vec![build_theta(&g, ThetaForm::Max), build_theta(&g, ThetaForm::Min), build_inv_theta(&g), build_gw(&g)];
        built.push(build_alpha0_dual(&g).unwrap());
        built.push(build_alpha_tilde_feas(&g, 0.4).unwrap());
        built.push(build_dnn_copositive(&g).unwrap());
        built.push(build_theta(&gc, ThetaForm::Max));
        for f in &built {
            prop_assert!(f.problem.validate().is_ok(), "{:?}", f.tag.kind);
        }
    }

    #[test]
    fn theta_forms_agree(g in graph(6)) {
        let max = solve(&build_theta(&g, ThetaForm::Max).problem, &opts()).unwrap();
        let min = solve(&build_theta(&g, ThetaForm::Min).problem, &opts()).unwrap();
        prop_assert!(max.is_optimal() && min.is_optimal());
        prop_assert!((max.primal_obj - min.primal_obj).abs() <= 1e-5, "{} vs {}", max.primal_obj, min.primal_obj);
    }

    #[test]
    fn inverse_theta_renormalises_theta_of_complement(g in graph_with_edge(6)) {
        let inv = solve_formulation(&build_inv_theta(&g), &opts(), "inv_theta").unwrap().primal_obj;
        let theta = solve_formulation(&build_theta(&complement(&g), ThetaForm::Max), &opts(), "theta").unwrap().primal_obj;
        prop_assert!((inv * theta - 1.0).abs() <= 1e-4, "{inv} * {theta}");
    }

    #[test]
    fn iterates_satisfy_the_gap_identity(g in graph_with_edge(6)) {
        for f in [build_gw(&g), build_alpha0_dual(&g).unwrap(), build_inv_theta(&g)] {
            let sol = solve(&f.problem, &opts()).unwrap();
            let sgn = if f.problem.sense == Sense::Maximize { -1.0 } else { 1.0 };
            let mut rises = 0;
            for (k, rec) in sol.history.iter().enumerate() {
                let diff = sgn * (rec.primal_obj - rec.dual_obj);
                let scale = 1.0 + rec.primal_obj.abs() + rec.dual_obj.abs() + rec.gap.abs();
                prop_assert!((diff - rec.gap - rec.infeasibility_term).abs() <= 1e-9 * scale);
                prop_assert!(rec.gap >= 0.0);
                if k > 0 && rec.gap > sol.history[k - 1].gap {
                    rises += 1;
                }
            }
            prop_assert!(rises as f64 <= 0.05 * sol.history.len().max(1) as f64, "{:?}: {rises} rises", f.tag.kind);
        }
    }

    #[test]
    fn alpha0_brackets(g in graph_with_edge(7)) {
        let a = alpha0(&g, DEFAULT_ALPHA0_TOL).unwrap();
        let t = theta_c(&g);
        prop_assert!(1.0 / t - 1e-6 <= a.value && a.value <= 0.5 + 1e-9, "1/theta = {}, alpha0 = {}", 1.0 / t, a.value);
        prop_assert_eq!((a.value - 0.5).abs() <= 1e-7, g.is_bipartite());
        let (lo, hi) = alpha0_degree_bounds(&g).unwrap();
        prop_assert!(lo <= a.value + 1e-6 && a.value <= hi + 1e-6, "{lo} <= {} <= {hi}", a.value);
        prop_assert!((alpha0_via_dual(&g, &opts()).unwrap() - a.value).abs() <= 1e-5);
        let omega = clique_number(&g).unwrap();
        prop_assert!(1.0 / t <= 1.0 / omega as f64 + 1e-6);
    }

    #[test]
    fn eigenvalue_bound_on_grid(g in graph_with_edge(7)) {
        let t = theta_c(&g);
        let mats = matrices(&g);
        for a in alpha_grid() {
            let lm = sym_eig(&mats.a_alpha(a)).unwrap().lambda_min();
            prop_assert!(lm <= lambda_min_alpha_bound_with(&g, a, t).unwrap() + 1e-6, "alpha = {a}");
        }
    }

    #[test]
    fn cut_chain_and_certificates(g in graph_with_edge(7)) {
        let cb = cut_bounds(&g, &opts()).unwrap();
        let a = alpha0(&g, DEFAULT_ALPHA0_TOL).unwrap().value;
        prop_assert!(cb.lower_maxcut <= cb.lower_gw + 1e-6 && cb.lower_gw <= a + 1e-6);
        if let Some(up) = cb.maxcut_upper {
            prop_assert!(cb.maxcut.size as f64 <= up + 1e-9);
        }
        let gw = alphatheta::parameters::gw_value(&g, &opts()).unwrap();
        let relax = cert_gw(&g, &gw.x, gw.value).unwrap().check(&g).unwrap();
        let cut = cert_maxcut(&g).unwrap().check(&g).unwrap();
        prop_assert!(relax.passed && cut.passed, "{:?} {:?}", relax, cut);
        prop_assert!(relax.achieved_objective >= cut.achieved_objective - 1e-9);
        prop_assert!(cert_scaled_identity(&g).unwrap().check(&g).unwrap().passed);
    }

    #[test]
    fn clique_certificate_is_copositive(g in graph_with_edge(7)) {
        let cert = cert_motzkin(&g, clique_number(&g).unwrap()).unwrap();
        prop_assert!(cert.exact.iter().all(|e| e.holds));
        prop_assert!(copositivity_sample_check(&cert.raw, 2_000, 0).min_qform >= -1e-9);
        prop_assert!(cert.check(&g).unwrap().passed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn alpha_tilde_matches_inverse_theta(g in graph_with_edge(5)) {
        let at = alpha_tilde(&g, DEFAULT_ALPHA_TILDE_TOL, &opts()).unwrap().value;
        let a = alpha0(&g, DEFAULT_ALPHA0_TOL).unwrap().value;
        prop_assert!((at - 1.0 / theta_c(&g)).abs() <= 1e-4);
        prop_assert!(at <= a + 1e-6, "{at} > {a}");
    }
}
