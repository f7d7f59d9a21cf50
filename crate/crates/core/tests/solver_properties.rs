mod common;

use common::{labels_of, naive_total_by_paths, permutations};
use mret_core::solvers::{arborescence_schedule, EXACT_SCHEDULE_LIMIT};
use mret_core::{
    evaluate_schedule, gen_random_sc, greedy_pair, solve_arborescence, solve_exact, solve_local,
    Digraph, RootChoice,
};

fn brute_force_optimum(g: &Digraph) -> (u64, Vec<usize>) {
    let mut best = (0, Vec::new());
    for order in permutations(g.edge_count()) {
        let t = naive_total_by_paths(g, &labels_of(&order));
        if t > best.0 {
            best = (t, order);
        }
    }
    best
}

#[test]
fn exact_solver_agrees_with_path_enumeration() {
    for seed in 0..25u64 {
        let n = 2 + (seed % 4) as usize;
        let extra = (seed as usize) % (n * (n - 1) - n + 1).min(3);
        let g = gen_random_sc(n, extra, seed).unwrap();
        let r = solve_exact(&g, EXACT_SCHEDULE_LIMIT).unwrap();
        let (total, order) = brute_force_optimum(&g);
        assert_eq!(r.best_total, total);
        // both scan orders lexicographically and keep the first maximum
        assert_eq!(r.best_schedule.order(), order.as_slice());
        assert_eq!(r.explored, (1..=g.edge_count() as u64).product::<u64>());
    }
}

#[test]
fn local_search_never_beats_the_exact_optimum() {
    for seed in 0..20u64 {
        let g = gen_random_sc(5, 3, seed).unwrap();
        let exact = solve_exact(&g, EXACT_SCHEDULE_LIMIT).unwrap();
        let local = solve_local(&g, seed, 4, 60).unwrap();
        let arb = solve_arborescence(&g, RootChoice::All, seed).unwrap();
        assert!(local.best_total <= exact.best_total);
        assert!(arb.best_total <= exact.best_total);
        for r in [&exact, &local, &arb] {
            assert_eq!(
                evaluate_schedule(&g, &r.best_schedule).unwrap().total(),
                r.best_total
            );
        }
    }
}

#[test]
fn arborescence_schedule_certifies_its_product() {
    for seed in 0..50u64 {
        let n = 8 + (seed as usize * 5) % 40;
        let g = gen_random_sc(n, (seed as usize * 3) % (2 * n), seed).unwrap();
        for root in [0, n / 2, n - 1] {
            let pair = greedy_pair(&g, root, seed).unwrap();
            let s = arborescence_schedule(&g, &pair);
            let r = evaluate_schedule(&g, &s).unwrap();
            for &u in &pair.in_nodes {
                for &v in &pair.out_nodes {
                    assert!(
                        r.reaches(u, v),
                        "seed {seed}: {u} should reach {v} via root {root}"
                    );
                }
            }
        }
        let best = solve_arborescence(&g, RootChoice::All, seed).unwrap();
        let cert = best.certificate.unwrap();
        assert!(best.best_total >= cert.product());
        assert!(cert.product() >= cert.in_nodes.max(cert.out_nodes) as u64);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let g = gen_random_sc(24, 30, 5).unwrap();
    let small = gen_random_sc(4, 4, 5).unwrap();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            (
                solve_exact(&small, EXACT_SCHEDULE_LIMIT).unwrap(),
                solve_local(&g, 17, 9, 150).unwrap(),
                solve_arborescence(&g, RootChoice::All, 17).unwrap(),
            )
        })
    };
    assert_eq!(run(1), run(4));
}
