//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use rlc_core::builder::{Direction, EntrySink, InsertOutcome, KbsEngine};
use rlc_core::graph::{generate_ba, generate_er, in_out_order, write_edge_list};
use rlc_core::index::MrId;
use rlc_core::labelseq::{kernel_decompose, minimum_repeat, primitive_count, KernelDecomposition};
use rlc_core::workload::{
    generate_workload, run_bench, verify_equivalence, write_workload, BenchConfig, BreakEven, EvaluatorKind,
    VerifyParams, VerifyReport, WorkloadParams,
};
use rlc_core::{build_index, sample_graphs, Graph, Label, LabelSeq, RlcIndex, VertexId};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn seq(g: &Graph, text: &str) -> LabelSeq {
    g.parse_labels(text).unwrap()
}

fn worked_examples() -> Outcome {
    let start = Instant::now();
    let g = sample_graphs::six_vertex();
    let idx = build_index(&g, 2).map_err(|e| e.to_string())?;
    for (s, t, l, want) in [("v3", "v6", "l2 l1", true), ("v1", "v2", "l2 l1", true), ("v1", "v3", "l1", false)] {
        let got = idx.query_named(s, t, l).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("({s}, {t}, ({l})+) gave {got}"))?;
    }
    let order: Vec<&str> = in_out_order(&g).as_slice().iter().map(|&v| g.vertex_name(v)).collect();
    ensure(order == ["v1", "v3", "v2", "v4", "v5", "v6"], || format!("order {order:?}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("3 queries and vertex order as expected in {elapsed:?}"))
}

const REFERENCE_TABLE: [&str; 26] = [
    "v1 Out v1 l2",
    "v1 Out v1 l1",
    "v1 Out v1 l2 l1",
    "v2 In v1 l1",
    "v2 In v1 l2 l1",
    "v2 Out v1 l2 l1",
    "v2 Out v1 l1",
    "v3 In v1 l2",
    "v3 In v1 l1 l2",
    "v3 Out v1 l2",
    "v3 Out v1 l2 l1",
    "v3 Out v1 l1",
    "v3 Out v3 l1 l2",
    "v4 In v1 l2",
    "v4 Out v1 l1",
    "v4 Out v3 l1 l2",
    "v5 In v1 l1 l2",
    "v5 In v1 l1",
    "v5 In v3 l1 l2",
    "v5 In v2 l2",
    "v5 Out v1 l1",
    "v5 Out v3 l1 l2",
    "v6 In v1 l2 l1",
    "v6 In v3 l1",
    "v6 In v3 l2 l3",
    "v6 In v4 l3",
];

fn index_table() -> Outcome {
    let idx = build_index(&sample_graphs::six_vertex(), 2).map_err(|e| e.to_string())?;
    let mut got: Vec<String> =
        idx.named_entries().into_iter().map(|(v, side, hub, l)| format!("{v} {side:?} {hub} {l}")).collect();
    got.sort();
    let mut want: Vec<String> = REFERENCE_TABLE.iter().map(|s| s.to_string()).collect();
    want.sort();
    let missing: Vec<&String> = want.iter().filter(|e| !got.contains(e)).collect();
    let extra: Vec<&String> = got.iter().filter(|e| !want.contains(e)).collect();
    ensure(got == want, || format!("missing {missing:?}, extra {extra:?}"))?;
    Ok(format!("entry multiset equals the reference table ({} entries)", got.len()))
}

fn verify_params() -> VerifyParams {
    VerifyParams {
        graphs: 200,
        vertices: (5, 50),
        avg_degree: (1.0, 6.0),
        labels: (2, 4),
        k_values: vec![1, 2, 3],
        seed: 2024,
        ..VerifyParams::default()
    }
}

fn oracle_equivalence(report: &Result<(VerifyReport, Duration), String>) -> Outcome {
    let (report, elapsed) = report.as_ref().map_err(Clone::clone)?;
    ensure(report.graphs.len() >= 200, || format!("only {} graphs", report.graphs.len()))?;
    ensure(report.mismatches() == 0, || {
        let first = report.graphs.iter().flat_map(|g| &g.mismatches).next();
        format!("{} mismatches, first {first:?}", report.mismatches())
    })?;
    ensure(*elapsed <= Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} graphs, {} triples, 0 mismatches among index/ETC/NFA-BFS/BiBFS in {:.1?}",
        report.graphs.len(),
        report.queries(),
        elapsed
    ))
}

fn condensedness(report: &Result<(VerifyReport, Duration), String>) -> Outcome {
    let (report, _) = report.as_ref().map_err(Clone::clone)?;
    let violations = report.condensed_violations();
    ensure(violations == 0, || format!("{violations} redundant entries"))?;
    let entries: usize = report.graphs.iter().map(|g| g.entries).sum();
    Ok(format!("0 redundant entries over {entries} entries in {} indexes", report.graphs.len()))
}

struct Ignore;

impl EntrySink for Ignore {
    fn offer(&mut self, _: VertexId, _: VertexId, _: MrId, _: Direction) -> InsertOutcome {
        InsertOutcome::Accepted
    }
}

fn kernel_search_fidelity() -> Outcome {
    let g = sample_graphs::six_vertex();
    let v = |n| g.vertex_id(n).unwrap();
    let mut engine = KbsEngine::new(&g, 2);
    let found = engine.kernel_search(&mut Ignore, v("v1"), Direction::Backward).named(engine.dictionary());
    let want: BTreeMap<LabelSeq, BTreeSet<VertexId>> = [
        (seq(&g, "l1"), [v("v4"), v("v5"), v("v2")].into()),
        (seq(&g, "l2"), [v("v3"), v("v1")].into()),
        (seq(&g, "l2 l1"), [v("v3"), v("v2")].into()),
    ]
    .into();
    ensure(found == want, || format!("got {found:?}"))?;
    Ok("candidate map matches the hand-computed map".into())
}

fn brute_mr(l: &[Label]) -> &[Label] {
    let n = l.len();
    let d = (1..=n).filter(|d| n.is_multiple_of(*d)).find(|&d| (0..n).all(|i| l[i] == l[i % d])).unwrap();
    &l[..d]
}

/// Every split `L = K^h ∘ T` with `h ≥ 2`, `K` primitive and `T` a proper
/// prefix of `K`.
fn brute_kernels(l: &[Label]) -> Vec<KernelDecomposition> {
    let n = l.len();
    let mut out = Vec::new();
    for p in 1..=n / 2 {
        let kernel = &l[..p];
        if brute_mr(kernel).len() != p {
            continue;
        }
        let h = n / p;
        let tail = &l[h * p..];
        if (0..h * p).all(|i| l[i] == kernel[i % p]) && tail == &kernel[..tail.len()] {
            out.push(KernelDecomposition {
                kernel: LabelSeq::from(kernel),
                tail: LabelSeq::from(tail),
                repetitions: h,
            });
        }
    }
    out
}

fn check_string(labels: &[Label]) -> Result<(), String> {
    let s = LabelSeq::from(labels);
    let mr = minimum_repeat(&s).map_err(|e| e.to_string())?;
    ensure(mr.labels() == brute_mr(labels), || format!("MR of {s}"))?;
    let kernels = brute_kernels(labels);
    ensure(kernels.len() <= 1, || format!("{s} has {} kernels", kernels.len()))?;
    let got = kernel_decompose(&s).map_err(|e| e.to_string())?;
    ensure(got == kernels.into_iter().next(), || format!("kernel of {s}"))
}

fn string_algebra() -> Outcome {
    let mut exhaustive = 0u64;
    for alphabet in 1..=4u32 {
        for len in 1..=8u32 {
            for mut code in 0..alphabet.pow(len) {
                let mut labels = vec![Label(0); len as usize];
                for slot in labels.iter_mut() {
                    *slot = Label(code % alphabet);
                    code /= alphabet;
                }
                check_string(&labels)?;
                exhaustive += 1;
            }
        }
    }
    let mut rng = Xoshiro256StarStar::seed_from_u64(6);
    let random = 100_000u64;
    for _ in 0..random {
        let alphabet = rng.random_range(1..=4u32);
        let len = rng.random_range(9..=12usize);
        // bias towards periodic words, which uniform draws almost never give
        let period = rng.random_range(1..=len);
        let base: Vec<Label> = (0..period).map(|_| Label(rng.random_range(0..alphabet))).collect();
        let mut labels: Vec<Label> = (0..len).map(|i| base[i % period]).collect();
        if rng.random_bool(0.2) {
            let i = rng.random_range(0..len);
            labels[i] = Label(rng.random_range(0..alphabet));
        }
        check_string(&labels)?;
    }
    for alphabet in 1..=4u64 {
        for k in 1..=5u32 {
            let mut count = 0u128;
            for len in 1..=k {
                for mut code in 0..alphabet.pow(len) {
                    let labels: Vec<Label> = (0..len)
                        .map(|_| {
                            let l = Label((code % alphabet) as u32);
                            code /= alphabet;
                            l
                        })
                        .collect();
                    if brute_mr(&labels).len() == labels.len() {
                        count += 1;
                    }
                }
            }
            let formula = primitive_count(alphabet, k).map_err(|e| e.to_string())?;
            ensure(formula == count, || format!("primitive_count({alphabet}, {k}) = {formula}, enumerated {count}"))?;
        }
    }
    Ok(format!("{exhaustive} exhaustive + {random} random sequences, kernels unique, primitive counts agree"))
}

/// Case analysis over the path label `l` for bound `k`: the k-MR it yields.
fn theorem_certificate(l: &[Label], k: usize) -> Option<LabelSeq> {
    let mr = LabelSeq::from(brute_mr(l));
    if l.len() <= k {
        return Some(mr);
    }
    if l.len() <= 2 * k {
        return (mr.len() <= k).then_some(mr);
    }
    let prefix = LabelSeq::from(&l[..2 * k]);
    let d = kernel_decompose(&prefix).unwrap()?;
    let mut rest = d.tail.labels().to_vec();
    rest.extend_from_slice(&l[2 * k..]);
    (brute_mr(&rest) == d.kernel.labels()).then_some(d.kernel)
}

fn theorem_paths() -> Outcome {
    let mut rng = Xoshiro256StarStar::seed_from_u64(7);
    let graphs = 60;
    let mut paths = 0u64;
    for i in 0..graphs {
        let n = rng.random_range(2..=12);
        let labels = rng.random_range(1..=3);
        let d = rng.random_range(1.0..2.5f64);
        let g = generate_er(n, d, labels, 1.0, i).map_err(|e| e.to_string())?;
        for k in 1..=2usize {
            let max_len = 2 * k + 4;
            // depth-first enumeration of label sequences along every path
            let mut stack: Vec<(VertexId, Vec<Label>)> = (0..n as VertexId).map(|v| (v, Vec::new())).collect();
            while let Some((v, l)) = stack.pop() {
                if !l.is_empty() {
                    paths += 1;
                    let truth = brute_mr(&l);
                    let has_kmr = truth.len() <= k;
                    let cert = theorem_certificate(&l, k);
                    ensure(cert.is_some() == has_kmr, || format!("graph {i}, k={k}, path label {:?}", l))?;
                    if let Some(c) = cert {
                        ensure(c.labels() == truth, || format!("graph {i}: certified {c} for {:?}", l))?;
                    }
                }
                if l.len() < max_len {
                    for &(w, label) in g.out_edges(v) {
                        let mut next = l.clone();
                        next.push(label);
                        stack.push((w, next));
                    }
                }
            }
        }
    }
    Ok(format!("{paths} paths on {graphs} graphs agree with the case analysis"))
}

fn performance() -> Outcome {
    let g = generate_er(100_000, 5.0, 8, 2.0, 42).map_err(|e| e.to_string())?;
    let workload =
        generate_workload(&g, &WorkloadParams { seed: 1, ..WorkloadParams::default() }).map_err(|e| e.to_string())?;
    ensure(workload.true_count() == 1000 && workload.false_count() == 1000, || "workload size".into())?;
    let config = BenchConfig {
        k: 2,
        repeats: 5,
        evaluators: vec![EvaluatorKind::Index, EvaluatorKind::Bfs, EvaluatorKind::BiBfs],
    };
    let report = run_bench(&g, &workload, &config).map_err(|e| e.to_string())?;
    for line in report.to_string().lines() {
        println!("    {line}");
    }
    let build = report.rows[0].build.unwrap();
    ensure(build <= Duration::from_secs(15 * 60), || format!("build took {build:?}"))?;
    let su = |kind| report.row(kind).and_then(|r| r.speedup).unwrap_or(0.0);
    let (su_bfs, su_bibfs) = (su(EvaluatorKind::Bfs), su(EvaluatorKind::BiBfs));
    ensure(su_bfs >= 10.0, || format!("speed-up over NFA-BFS only {su_bfs:.1}"))?;
    ensure(su_bibfs >= 5.0, || format!("speed-up over BiBFS only {su_bibfs:.1}"))?;
    ensure(
        report.rows[1..].iter().all(|r| matches!(r.break_even, Some(BreakEven::Queries(_) | BreakEven::Never))),
        || "missing break-even points".into(),
    )?;
    Ok(format!("build {:.1}s, SU {su_bfs:.0}x vs NFA-BFS, {su_bibfs:.0}x vs BiBFS", build.as_secs_f64()))
}

fn round_trips(idx: &RlcIndex) -> Result<(), String> {
    let bytes = idx.to_bytes();
    let back = RlcIndex::from_bytes(&bytes).map_err(|e| e.to_string())?;
    ensure(back.to_bytes() == bytes, || "bytes differ after reload".into())?;
    let n = idx.num_vertices() as VertexId;
    for (mr, _) in idx.dictionary().iter() {
        for s in 0..n {
            for t in 0..n {
                ensure(idx.query_mr(s, t, mr) == back.query_mr(s, t, mr), || format!("query ({s}, {t}, #{mr})"))?;
            }
        }
    }
    Ok(())
}

fn serialization(report: &Result<(VerifyReport, Duration), String>) -> Outcome {
    let (report, _) = report.as_ref().map_err(Clone::clone)?;
    let params = verify_params();
    let mut count = 0;
    for g in [sample_graphs::six_vertex(), sample_graphs::social_network()] {
        round_trips(&build_index(&g, 2).map_err(|e| e.to_string())?)?;
        count += 1;
    }
    for check in &report.graphs {
        let g = generate_er(check.vertices, check.avg_degree, check.labels, params.zipf, check.seed)
            .map_err(|e| e.to_string())?;
        ensure(g.num_edges() == check.edges, || "regenerated graph differs".into())?;
        round_trips(&build_index(&g, check.k).map_err(|e| e.to_string())?)?;
        count += 1;
    }
    Ok(format!("{count} indexes reload byte-identical with identical answers"))
}

fn determinism() -> Outcome {
    let edge_bytes = |g: &Graph| {
        let mut buf = Vec::new();
        write_edge_list(g, &[], &mut buf).unwrap();
        buf
    };
    let er = || generate_er(5000, 5.0, 8, 2.0, 99).unwrap();
    let ba = || generate_ba(5000, 3, 8, 2.0, 99).unwrap();
    ensure(edge_bytes(&er()) == edge_bytes(&er()), || "ER graphs differ".into())?;
    ensure(edge_bytes(&ba()) == edge_bytes(&ba()), || "BA graphs differ".into())?;
    let g = er();
    let params = WorkloadParams { true_queries: 200, false_queries: 200, seed: 5, ..WorkloadParams::default() };
    let workload_bytes = || {
        let mut buf = Vec::new();
        write_workload(&g, &generate_workload(&g, &params).unwrap(), &mut buf).unwrap();
        buf
    };
    ensure(workload_bytes() == workload_bytes(), || "workloads differ".into())?;
    let index_bytes = || build_index(&g, 2).unwrap().to_bytes();
    ensure(index_bytes() == index_bytes(), || "indexes differ".into())?;
    Ok("graphs, workload and index bytes repeat exactly".into())
}

fn main() -> ExitCode {
    let started = Instant::now();
    let verification = {
        let t = Instant::now();
        verify_equivalence(&verify_params()).map(|r| (r, t.elapsed())).map_err(|e| e.to_string())
    };
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "worked examples", worked_examples()),
        (2, "index table", index_table()),
        (3, "oracle equivalence", oracle_equivalence(&verification)),
        (4, "condensedness", condensedness(&verification)),
        (5, "kernel search", kernel_search_fidelity()),
        (6, "string algebra", string_algebra()),
        (7, "path case analysis", theorem_paths()),
        (8, "desk-scale performance", performance()),
        (9, "serialization", serialization(&verification)),
        (10, "determinism", determinism()),
    ];
    let mut failed = 0;
    for (id, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed ({:.1?})", results.len() - failed, started.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
