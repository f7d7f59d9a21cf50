mod common;

use common::labeling_optimum;
use mret_core::astra::{check_pair, EXACT_EDGE_LIMIT};
use mret_core::{best_root, exact_pair, gen_fig3, gen_random_sc, greedy_pair, Digraph, PairMethod};

fn cycle(n: usize) -> Digraph {
    Digraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
}

#[test]
fn labeling_oracle_values_on_cycles() {
    // frozen from the ternary labeling oracle
    let expected = [(2, (2, 4)), (3, (2, 5)), (4, (3, 6)), (5, (3, 7))];
    for (n, want) in expected {
        let g = cycle(n);
        for root in 0..n {
            assert_eq!(labeling_optimum(&g, root), want, "oracle n={n}");
            let p = exact_pair(&g, root, EXACT_EDGE_LIMIT).unwrap();
            check_pair(&g, &p).unwrap();
            assert_eq!(
                (p.min_size(), p.size_sum()),
                want,
                "exact n={n} root={root}"
            );
        }
    }
}

#[test]
fn exact_matches_labeling_oracle_on_random_graphs() {
    for seed in 0..40u64 {
        let n = 3 + (seed % 4) as usize;
        let extra = (seed as usize * 7) % (n * (n - 1) - n + 1).min(6);
        let g = gen_random_sc(n, extra, seed).unwrap();
        for root in 0..n {
            let p = exact_pair(&g, root, EXACT_EDGE_LIMIT).unwrap();
            check_pair(&g, &p).unwrap();
            assert_eq!(
                (p.min_size(), p.size_sum()),
                labeling_optimum(&g, root),
                "seed {seed} root {root}"
            );
            let q = greedy_pair(&g, root, seed).unwrap();
            check_pair(&g, &q).unwrap();
            assert!(q.min_size() <= p.min_size());
        }
    }
}

#[test]
fn greedy_pairs_are_valid_on_larger_graphs() {
    for seed in 0..30u64 {
        let g = gen_random_sc(40, 60, seed).unwrap();
        for root in [0, 13, 39] {
            let p = greedy_pair(&g, root, seed).unwrap();
            check_pair(&g, &p).unwrap();
            assert!(p.min_size() >= 2);
            let depths = p.in_depths(&g);
            assert!(p.in_nodes.iter().all(|&v| depths[v].is_some()));
        }
    }
}

#[test]
fn fig3_ceilings() {
    for k in [1usize, 2] {
        let (g, _) = gen_fig3(k).unwrap();
        assert!(g.edge_count() <= EXACT_EDGE_LIMIT);
        let report = best_root(
            &g,
            PairMethod::Exact {
                limit: EXACT_EDGE_LIMIT,
            },
        )
        .unwrap();
        assert!(report.best_min <= k + 8);
        for v in &report.per_root {
            if v.root > 1 {
                assert!(
                    v.min_size <= k + 3,
                    "k={k} root {} has {}",
                    v.root,
                    v.min_size
                );
            }
        }
        let greedy = best_root(&g, PairMethod::Greedy { seed: 5 }).unwrap();
        for (gv, ev) in greedy.per_root.iter().zip(&report.per_root) {
            assert!(gv.min_size <= ev.min_size);
        }
    }
}

#[test]
fn fig3_golden_edges() {
    let (g, roles) = gen_fig3(1).unwrap();
    assert_eq!(
        g.to_text(),
        "11 16\n0 1\n1 2\n2 3\n3 0\n3 8\n8 2\n1 4\n4 5\n5 0\n5 9\n9 4\n1 6\n6 7\n7 0\n7 10\n10 6\n"
    );
    let names: Vec<String> = roles.iter().map(|r| r.to_string()).collect();
    assert_eq!(
        names,
        ["x", "y", "x_1", "y_1", "x_2", "y_2", "x_3", "y_3", "z_1,1", "z_2,1", "z_3,1"]
    );
}

#[test]
fn exact_report_is_deterministic() {
    let (g, _) = gen_fig3(1).unwrap();
    let a = best_root(&g, PairMethod::Exact { limit: 20 }).unwrap();
    let b = best_root(&g, PairMethod::Exact { limit: 20 }).unwrap();
    assert_eq!(a, b);
    assert!(a.ratio > 0.0 && a.ratio <= 1.0);
}
