//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{all_simple_digraphs, labels_of, naive_total_by_paths, permutations};
use mret_core::astra::EXACT_EDGE_LIMIT;
use mret_core::reduction::gadget_activation;
use mret_core::solvers::EXACT_SCHEDULE_LIMIT;
use mret_core::{
    best_root, build_instance, certify, check_bounds, evaluate_order, evaluate_schedule, gen_fig3,
    gen_random_sc, is_strongly_connected, schedule_from_assignment, solve_arborescence,
    solve_exact, Assignment, CnfFormula, Digraph, PairMethod, ReductionParams, RootChoice,
    Schedule,
};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ac1_engine_matches_oracle() -> Outcome {
    let start = Instant::now();
    let mut graphs = 0u64;
    let mut schedules = 0u64;
    for n in 1..=4 {
        for g in all_simple_digraphs(n, 5) {
            graphs += 1;
            for order in permutations(g.edge_count()) {
                schedules += 1;
                let engine = evaluate_order(&g, &order)
                    .map_err(|e| e.to_string())?
                    .total();
                let oracle = naive_total_by_paths(&g, &labels_of(&order));
                ensure(engine == oracle, || {
                    format!(
                        "{:?} order {order:?}: engine {engine}, oracle {oracle}",
                        g.edges()
                    )
                })?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:.1?}")
    })?;
    Ok(format!(
        "{graphs} digraphs, {schedules} schedules, {elapsed:.2?}"
    ))
}

fn ac2_exact_ground_truth() -> Outcome {
    let cases = [
        (
            "4-cycle",
            Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(),
            13,
        ),
        ("3-path", Digraph::new(3, vec![(0, 1), (1, 2)]).unwrap(), 6),
        ("2-cycle", Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap(), 4),
    ];
    let mut parts = Vec::new();
    for (name, g, want) in cases {
        let r = solve_exact(&g, EXACT_SCHEDULE_LIMIT).map_err(|e| e.to_string())?;
        ensure(r.best_total == want, || {
            format!("{name}: got {}, want {want}", r.best_total)
        })?;
        let oracle = permutations(g.edge_count())
            .iter()
            .map(|o| naive_total_by_paths(&g, &labels_of(o)))
            .max()
            .unwrap();
        ensure(oracle == want, || {
            format!("{name}: oracle optimum {oracle}")
        })?;
        parts.push(format!("{name}={want}"));
    }
    Ok(parts.join(", "))
}

fn random_formula(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Option<CnfFormula> {
    let clauses: Vec<Vec<i64>> = (0..m)
        .map(|_| {
            let mut vars: Vec<i64> = (1..=n as i64).collect();
            vars.shuffle(rng);
            vars[..3]
                .iter()
                .map(|&v| if rng.random_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    // rejects formulas where some variable lacks a polarity
    CnfFormula::from_dimacs_clauses(n, &clauses).ok()
}

fn satisfying(f: &CnfFormula) -> Option<Assignment> {
    let n = f.variables();
    (0u32..1 << n).find_map(|bits| {
        let a = Assignment((0..n).map(|i| bits >> i & 1 == 1).collect());
        f.first_unsatisfied(&a).is_none().then_some(a)
    })
}

fn ac3_constructive_lower_bound() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut corpus =
        vec![CnfFormula::parse_dimacs("p cnf 3 3\n1 2 3 0\n-1 2 3 0\n-1 -2 -3 0\n").unwrap()];
    while corpus.len() < 12 {
        let n = rng.random_range(3..=5);
        let m = rng.random_range(3..=8);
        if let Some(f) = random_formula(&mut rng, n, m) {
            if satisfying(&f).is_some() {
                corpus.push(f);
            }
        }
    }
    let mut checks = 0;
    for f in &corpus {
        let a = satisfying(f).unwrap();
        for k in [1, 2] {
            for big_m in [1, 5] {
                let inst = build_instance(f, Some(k), Some(big_m)).map_err(|e| e.to_string())?;
                let s = schedule_from_assignment(&inst, &a).map_err(|e| e.to_string())?;
                let v = certify(&inst, &s).map_err(|e| e.to_string())?;
                ensure(v.meets_l, || {
                    format!(
                        "K={k} M={big_m} {:?}: total {} < L {}",
                        f.dimacs_clauses(),
                        v.total,
                        v.l
                    )
                })?;
                checks += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:.1?}")
    })?;
    Ok(format!(
        "{} formulas, {checks} instances, {elapsed:.2?}",
        corpus.len()
    ))
}

fn ac4_official_bounds() -> Outcome {
    let mut smallest: Option<BigInt> = None;
    for n in 3..=6u64 {
        for m in 3..=8u64 {
            let p = ReductionParams::official(n, m).map_err(|e| e.to_string())?;
            let b = check_bounds(&p);
            ensure(b.l > b.u1 && b.l > b.u2, || {
                format!("n={n} m={m}: L={} U1={} U2={}", b.l, b.u1, b.u2)
            })?;
            let gap = (&b.l - &b.u1).min(&b.l - &b.u2);
            smallest = Some(smallest.map_or(gap.clone(), |s| s.min(gap)));
        }
    }
    Ok(format!(
        "24 (n,m) pairs, smallest margin {}",
        smallest.unwrap()
    ))
}

fn ac5_gadget_exclusivity() -> Outcome {
    // gadget cycle t1 -> f2 -> f1 -> t2 -> t1
    let (t1, t2, f1, f2) = (0, 3, 2, 1);
    let cycle = Digraph::new(4, vec![(t1, f2), (f2, f1), (f1, t2), (t2, t1)]).unwrap();
    let (mut trues, mut falses) = (0, 0);
    for order in permutations(4) {
        let mut pos = [0; 4];
        for (p, &e) in order.iter().enumerate() {
            pos[e] = p;
        }
        let act = gadget_activation(pos);
        let r = evaluate_order(&cycle, &order).map_err(|e| e.to_string())?;
        ensure(
            act.true_pair == r.reaches(t1, t2) && act.false_pair == r.reaches(f1, f2),
            || format!("order {order:?}: activation disagrees with the engine"),
        )?;
        ensure(!(act.true_pair && act.false_pair), || {
            format!("order {order:?} activates both pairs")
        })?;
        trues += act.true_pair as usize;
        falses += act.false_pair as usize;
    }
    ensure(trues > 0 && falses > 0, || {
        format!("true {trues}, false {falses}")
    })?;
    Ok(format!(
        "24 orders: {trues} activate (t1,t2), {falses} activate (f1,f2), none both"
    ))
}

fn ac6_astra_ceilings() -> Outcome {
    let mut parts = Vec::new();
    for k in [1usize, 2] {
        let (g, _) = gen_fig3(k).map_err(|e| e.to_string())?;
        ensure(g.edge_count() <= EXACT_EDGE_LIMIT, || {
            format!("k={k}: {} edges exceed the exact limit", g.edge_count())
        })?;
        let report = best_root(
            &g,
            PairMethod::Exact {
                limit: EXACT_EDGE_LIMIT,
            },
        )
        .map_err(|e| e.to_string())?;
        ensure(report.best_min <= k + 8, || {
            format!("k={k}: best min {} > {}", report.best_min, k + 8)
        })?;
        // roots 0 and 1 are x and y
        let others = report
            .per_root
            .iter()
            .filter(|v| v.root > 1)
            .map(|v| v.min_size)
            .max()
            .unwrap();
        ensure(others <= k + 3, || {
            format!("k={k}: a non-x,y root reaches {others} > {}", k + 3)
        })?;
        parts.push(format!(
            "k={k}: n={} best {} others ≤ {others}",
            g.node_count(),
            report.best_min
        ));
    }
    Ok(parts.join("; "))
}

fn ac7_arborescence_lower_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100u64 {
        let n = rng.random_range(2..=64);
        let extra = rng.random_range(0..=(2 * n).min(n * (n - 1) - n));
        let g = gen_random_sc(n, extra, i).map_err(|e| e.to_string())?;
        let r = solve_arborescence(&g, RootChoice::All, i).map_err(|e| e.to_string())?;
        let cert = r.certificate.as_ref().ok_or("missing certificate")?;
        let total = evaluate_schedule(&g, &r.best_schedule)
            .map_err(|e| e.to_string())?
            .total();
        ensure(total == r.best_total && total >= cert.product(), || {
            format!(
                "graph {i} (n={n}): total {total}, {} x {}",
                cert.in_nodes, cert.out_nodes
            )
        })?;
    }
    Ok("100 graphs".into())
}

fn ac8_structural_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut count = 0;
    for n in 3..=5usize {
        for m in (2..=6usize).filter(|&m| 3 * m >= 2 * n) {
            let f = loop {
                if let Some(f) = random_formula(&mut rng, n, m) {
                    break f;
                }
            };
            for k in 1..=3u64 {
                for big_m in [1u64, 2, 7] {
                    let inst =
                        build_instance(&f, Some(k), Some(big_m)).map_err(|e| e.to_string())?;
                    let (nn, mm) = (n as u64, m as u64);
                    let h = 2 * (k + 1) * mm + 4 * nn;
                    let nodes = big_m + h + 4;
                    let edges = 4 * nn + 6 * mm + mm * (mm - 1) + 4 * k * mm + 2 * big_m + 2;
                    ensure(inst.digraph.node_count() as u64 == nodes, || {
                        format!("n={n} m={m} K={k} M={big_m}: nodes")
                    })?;
                    ensure(inst.digraph.edge_count() as u64 == edges, || {
                        format!("n={n} m={m} K={k} M={big_m}: edges")
                    })?;
                    ensure(is_strongly_connected(&inst.digraph), || {
                        format!("n={n} m={m} K={k} M={big_m}: not strongly connected")
                    })?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} instances"))
}

fn ac9_performance() -> Outcome {
    let (nodes, edges) = (10_000, 100_000);
    let g = gen_random_sc(nodes, edges - nodes, 9).map_err(|e| e.to_string())?;
    let mut order: Vec<usize> = (0..edges).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(9));
    let s = Schedule::new(order, edges).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let total = evaluate_schedule(&g, &s)
        .map_err(|e| e.to_string())?
        .total();
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(2), || {
        format!("took {elapsed:.2?}")
    })?;
    Ok(format!(
        "{nodes} nodes, {edges} edges, total {total}, {elapsed:.2?}"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "engine matches temporal-path oracle",
            ac1_engine_matches_oracle,
        ),
        ("exact solver ground truth", ac2_exact_ground_truth),
        (
            "constructive schedules reach L",
            ac3_constructive_lower_bound,
        ),
        ("official bounds separate", ac4_official_bounds),
        ("gadget exclusivity", ac5_gadget_exclusivity),
        (
            "arborescence ceilings on the counterexample family",
            ac6_astra_ceilings,
        ),
        (
            "arborescence schedule lower bound",
            ac7_arborescence_lower_bound,
        ),
        ("reduction structure", ac8_structural_invariants),
        ("evaluation performance", ac9_performance),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
