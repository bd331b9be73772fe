//! Solver-level invariants that need the diagnostic hooks: bound
//! monotonicity along the tree, validity of every emitted clique cut, node
//! faces that survive propagation under simultaneous fixing, and agreement
//! of all symmetry modes on the optimum.

use orbifix::fixing::brute_force_fix;
use orbifix::partition::{
    generate_instance, solve, PartitionInstance, SolverConfig, SymmetryMode,
};

#[test]
fn bound_monotonicity_along_the_tree() {
    for seed in 0..10u64 {
        let p = [8u32, 10][(seed % 2) as usize];
        let inst = generate_instance(p, 3 * p, 3 + (seed % 2) as u32, 600 + seed).unwrap();
        let config = SolverConfig {
            symmetry: SymmetryMode::OrbitopalFixing,
            collect_diagnostics: true,
            ..SolverConfig::default()
        };
        let report = solve(&inst, &config).unwrap();
        let diag = report.diagnostics.unwrap();
        for &(parent, child) in &diag.bound_pairs {
            assert!(
                child >= parent - 1e-6,
                "child bound {child} below parent bound {parent}"
            );
        }
    }
}

#[test]
fn emitted_clique_cuts_are_valid() {
    for seed in 0..10u64 {
        let q = 3 + (seed % 2) as u32;
        let inst = generate_instance(12, 40, q, 700 + seed).unwrap();
        let config = SolverConfig {
            symmetry: SymmetryMode::Off,
            collect_diagnostics: true,
            ..SolverConfig::default()
        };
        let report = solve(&inst, &config).unwrap();
        let diag = report.diagnostics.unwrap();
        for cut in &diag.cuts {
            let n = cut.nodes.len() as u32;
            // brute force over all q-part assignments of the clique nodes
            let mut best = u64::MAX;
            let mut parts = vec![0u32; n as usize];
            loop {
                let intra = (0..n as usize)
                    .flat_map(|a| (a + 1..n as usize).map(move |b| (a, b)))
                    .filter(|&(a, b)| parts[a] == parts[b])
                    .count() as u64;
                best = best.min(intra);
                let mut k = 0;
                while k < n as usize {
                    if parts[k] + 1 < q {
                        parts[k] += 1;
                        break;
                    }
                    parts[k] = 0;
                    k += 1;
                }
                if k == n as usize {
                    break;
                }
            }
            assert!(
                best as f64 >= cut.rhs,
                "cut rhs {} exceeds the enumerated minimum {best} for {} nodes, q={q}",
                cut.rhs,
                n
            );
        }
    }
}

#[test]
fn surviving_faces_contain_a_vertex_under_fixing() {
    // with simultaneous fixing, first-index branching and no cuts, every
    // node face that survives propagation holds at least one vertex
    for seed in 0..8u64 {
        let p = [6u32, 8][(seed % 2) as usize];
        let inst = generate_instance(p, 2 * p, 3, 800 + seed).unwrap();
        let config = SolverConfig {
            symmetry: SymmetryMode::OrbitopalFixing,
            clique_cuts: false,
            collect_diagnostics: true,
            ..SolverConfig::default()
        };
        let report = solve(&inst, &config).unwrap();
        let diag = report.diagnostics.unwrap();
        assert!(!diag.node_faces.is_empty());
        for face in &diag.node_faces {
            let outcome = brute_force_fix(face).unwrap();
            assert!(
                !outcome.is_infeasible(),
                "a surviving node face contains no vertex: {face:?}"
            );
        }
    }
}

#[test]
fn all_modes_agree_on_fifty_instances() {
    for seed in 0..50u64 {
        let p = [8u32, 10, 12][(seed % 3) as usize];
        let q = [3u32, 4][(seed % 2) as usize];
        let m = 3 * p;
        let inst = generate_instance(p, m, q, 900 + seed).unwrap();
        let mut optima = Vec::new();
        for mode in [
            SymmetryMode::Off,
            SymmetryMode::OrbitopalFixing,
            SymmetryMode::Sci,
            SymmetryMode::IsoPruning,
        ] {
            let config = SolverConfig { symmetry: mode, ..SolverConfig::default() };
            let report = solve(&inst, &config).unwrap();
            assert!(report.finished);
            optima.push(report.optimum.unwrap());
        }
        optima.dedup();
        assert_eq!(optima.len(), 1, "modes disagree on seed {seed}");
    }
}

#[test]
fn start_assignment_is_honored() {
    let inst =
        PartitionInstance::new(4, 2, vec![(1, 2, 5), (3, 4, 5), (1, 3, 1)], "start".into())
            .unwrap();
    // a user start that is already optimal: split the heavy edges
    let config = SolverConfig {
        start: Some(vec![1, 2, 1, 2]),
        ..SolverConfig::default()
    };
    let report = solve(&inst, &config).unwrap();
    assert_eq!(report.optimum, Some(0));
    // malformed starts are rejected
    let config = SolverConfig { start: Some(vec![1, 2, 3, 1]), ..SolverConfig::default() };
    assert!(solve(&inst, &config).is_err());
}
