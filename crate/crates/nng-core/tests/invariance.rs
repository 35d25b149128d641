//! How the Gibbs distribution relates to the chain's true stationary law.
//!
//! On the two-site edge the Gibbs construction reproduces the stationary
//! distribution to solver precision and satisfies detailed balance. On
//! graphs with unequal degrees the F-product is order-dependent, the local
//! specification is not consistent, and the Gibbs distribution measurably
//! differs from the true stationary law; these tests freeze that measured
//! behavior so it cannot regress silently.

use nng_core::{
    compare_distributions, Alphabet, EnergyContext, EpsilonMode, FullKernelMatrix, Graph, Kernel,
};

fn stationary_and_gibbs(graph: Graph, eps: f64) -> (Vec<f64>, Vec<f64>, FullKernelMatrix) {
    let alphabet = Alphabet::new(2).unwrap();
    let kernel = Kernel::new(graph.clone(), alphabet, eps).unwrap();
    let m = FullKernelMatrix::build(&kernel).unwrap();
    let pi = m.stationary_distribution().unwrap();
    let ctx = EnergyContext::new(graph, alphabet, EpsilonMode::Finite(eps)).unwrap();
    let table = ctx.exact_distribution(100_000).unwrap();
    (pi, table.probabilities().to_vec(), m)
}

#[test]
fn gibbs_matches_stationary_on_the_two_site_edge() {
    for eps in [0.1, 0.01, 0.001] {
        let (pi, gibbs, m) = stationary_and_gibbs(Graph::builtin("fig1").unwrap(), eps);
        let cmp = compare_distributions(&gibbs, &pi, Some(&m)).unwrap();
        println!(
            "fig1 eps={eps}: tv={:.3e} db={:.3e} delta={:.3e}",
            cmp.tv,
            cmp.max_db_residual.unwrap(),
            cmp.max_delta_pi.unwrap()
        );
        assert!(cmp.tv < 1e-8, "eps {eps}: tv {}", cmp.tv);
        assert!(cmp.max_db_residual.unwrap() < 1e-10);
        assert!(cmp.max_delta_pi.unwrap() < 1e-10);
    }
}

#[test]
fn gibbs_deviates_on_unequal_degree_graphs() {
    let path3 = Graph::from_edges(&[(0, 1), (1, 2)]).unwrap();
    for (name, graph) in [("path3", path3), ("fig2", Graph::builtin("fig2").unwrap())] {
        let (pi, gibbs, m) = stationary_and_gibbs(graph, 0.01);
        let cmp = compare_distributions(&gibbs, &pi, Some(&m)).unwrap();
        println!(
            "{name} eps=0.01: tv={:.4} db={:.3e} delta={:.3e} inv_res={:.3e}",
            cmp.tv,
            cmp.max_db_residual.unwrap(),
            cmp.max_delta_pi.unwrap(),
            m.invariance_residual(&pi),
        );
        // the solver's pi really is stationary
        assert!(m.invariance_residual(&pi) < 1e-10);
        // and the Gibbs distribution is measurably not
        assert!(cmp.tv > 0.05, "{name}: tv {}", cmp.tv);
        assert!(cmp.max_delta_pi.unwrap() > 1e-6);
        // the chain itself is not reversible: its own stationary law breaks
        // detailed balance
        let self_cmp = compare_distributions(&pi, &pi, Some(&m)).unwrap();
        assert!(self_cmp.max_db_residual.unwrap() > 1e-8, "{name}");
    }
}
