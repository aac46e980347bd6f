//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any hard gate fails.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use stablereg::generators::{generate_detailed, seeded_weights, Prng};
use stablereg::rational::ratio;
use stablereg::verify::EXHAUSTIVE_PART_LIMIT;
use stablereg::{
    check_delta_regularity, check_theorem, classify_pair, counting_measure, decompose, generate, ladder_index,
    oracle_goodness, splitting_rank, BipartiteGraph, DecomposeConfig, DeltaMode, GeneratorSpec, Measure, Perturbation,
    RegularityPartition, Side, VertexSet,
};
use stablereg_cli::report::PartitionReport;

const SAMPLED_BUDGET: u64 = 100_000;
const SAMPLED_SEED: u64 = 0x5eed;

struct Run {
    label: String,
    g: BipartiteGraph,
    mu: Measure,
    nu: Measure,
    partition: RegularityPartition,
    elapsed: Duration,
    all_pass: bool,
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn epsilons() -> [BigRational; 3] {
    [ratio(1, 4), ratio(1, 10), ratio(1, 20)]
}

fn criterion_one_specs() -> Vec<GeneratorSpec> {
    let mut specs = vec![
        GeneratorSpec::CompleteBipartite { n_left: 16, n_right: 16 },
        GeneratorSpec::EmptyBipartite { n_left: 16, n_right: 16 },
    ];
    specs.extend((1..=8).map(|k| GeneratorSpec::HalfGraph { k }));
    for r in 1..=4 {
        for n in [64, 128, 256, 512] {
            specs.push(GeneratorSpec::rectangle_union(r, n, n, 1));
        }
    }
    specs.extend((0..20).map(|seed| GeneratorSpec::random(32, 32, ratio(1, 2), seed)));
    specs
}

fn run_one(label: String, g: BipartiteGraph, mu: Measure, nu: Measure, eps: &BigRational) -> Run {
    let start = Instant::now();
    let partition = decompose(&g, &mu, &nu, eps, &DecomposeConfig::default()).expect("decompose succeeds");
    let report = check_theorem(&g, &mu, &nu, &partition).expect("shapes match");
    let elapsed = start.elapsed();
    if !report.all_pass {
        eprintln!("{label}: {:?}", report.failures);
    }
    Run { label, g, mu, nu, partition, elapsed, all_pass: report.all_pass }
}

fn criterion_one_runs() -> Vec<Run> {
    let mut runs = Vec::new();
    for spec in criterion_one_specs() {
        let g = generate(&spec).unwrap();
        for eps in epsilons() {
            let (mu, nu) = (counting_measure(&g, Side::Left), counting_measure(&g, Side::Right));
            let label = format!("{} eps={eps}", serde_json::to_string(&spec).unwrap());
            runs.push(run_one(label, g.clone(), mu, nu, &eps));
        }
    }
    runs
}

fn within_round_bound(run: &Run) -> bool {
    run.partition.iterations <= run.g.n_left() + run.g.n_right() - 2
}

fn theorem_gate(runs: &[Run]) -> Outcome {
    let bad: Vec<&str> =
        runs.iter().filter(|r| !(r.all_pass && within_round_bound(r))).map(|r| r.label.as_str()).collect();
    let slowest = runs.iter().map(|r| r.elapsed).max().unwrap_or_default();
    let pass = bad.is_empty() && slowest < Duration::from_secs(10);
    outcome(pass, format!("{} runs, {} failing {:?}, slowest {:.2?}", runs.len(), bad.len(), bad, slowest))
}

fn exclusivity_gate(runs: &[Run]) -> Outcome {
    let flagged = runs
        .iter()
        .filter(|r| r.partition.epsilon <= ratio(29, 100))
        .flat_map(|r| r.partition.verdicts.iter().flatten())
        .filter(|v| v.both_hold)
        .count();
    let pairs: usize = runs.iter().map(|r| r.partition.verdicts.iter().map(Vec::len).sum::<usize>()).sum();
    outcome(flagged == 0, format!("{pairs} verdicts, both_hold set on {flagged}"))
}

fn delta_mode_for(p: &RegularityPartition) -> DeltaMode {
    let small = p.parts_left.iter().chain(&p.parts_right).all(|part| part.members.len() <= EXHAUSTIVE_PART_LIMIT);
    if small {
        DeltaMode::Exhaustive
    } else {
        DeltaMode::Sampled { budget: SAMPLED_BUDGET, seed: SAMPLED_SEED }
    }
}

fn delta_gate(runs: &[Run]) -> Outcome {
    let start = Instant::now();
    let (mut exhaustive, mut sampled, mut violations, mut tested) = (0, 0, 0u64, 0u64);
    for r in runs {
        let mode = delta_mode_for(&r.partition);
        match mode {
            DeltaMode::Exhaustive => exhaustive += 1,
            DeltaMode::Sampled { .. } => sampled += 1,
        }
        let report = check_delta_regularity(&r.g, &r.mu, &r.nu, &r.partition, mode).unwrap();
        if report.violation_count > 0 {
            eprintln!("{}: {:?}", r.label, report.violations.first());
        }
        violations += report.violation_count;
        tested += report.subset_pairs_tested;
    }
    let elapsed = start.elapsed();
    outcome(
        violations == 0 && elapsed < Duration::from_secs(60),
        format!(
            "{exhaustive} exhaustive + {sampled} sampled runs, {tested} subset pairs, {violations} violations, {elapsed:.2?}"
        ),
    )
}

fn ladder_gate() -> Outcome {
    let start = Instant::now();
    let mut wrong = Vec::new();
    for k in 1..=8 {
        let g = generate(&GeneratorSpec::HalfGraph { k }).unwrap();
        let li = ladder_index(&g, 9);
        if li.k != k || !li.certificate.as_ref().is_some_and(|c| c.verify(&g)) {
            wrong.push(format!("HalfGraph({k}) -> {}", li.k));
        }
    }
    let complete = generate(&GeneratorSpec::CompleteBipartite { n_left: 16, n_right: 16 }).unwrap();
    let empty = generate(&GeneratorSpec::EmptyBipartite { n_left: 16, n_right: 16 }).unwrap();
    for (name, g, want) in [("complete", complete, 1), ("empty", empty, 0)] {
        let got = ladder_index(&g, 8).k;
        if got != want {
            wrong.push(format!("{name} -> {got}"));
        }
    }
    let elapsed = start.elapsed();
    outcome(wrong.is_empty() && elapsed < Duration::from_secs(5), format!("mismatches {wrong:?}, {elapsed:.2?}"))
}

/// Whether a complete splitting tree of depth `d` exists over `set`.
fn rank_at_least(g: &BipartiteGraph, side: Side, set: &[usize], d: usize) -> bool {
    if d == 0 {
        return !set.is_empty();
    }
    set.len() >= 2
        && (0..g.size(side.opposite())).any(|p| {
            let (inside, outside): (Vec<usize>, Vec<usize>) = set.iter().partition(|&&v| match side {
                Side::Left => g.has_edge(v, p),
                Side::Right => g.has_edge(p, v),
            });
            !inside.is_empty()
                && !outside.is_empty()
                && rank_at_least(g, side, &inside, d - 1)
                && rank_at_least(g, side, &outside, d - 1)
        })
}

fn brute_rank(g: &BipartiteGraph, side: Side, set: &[usize]) -> usize {
    (1..).take_while(|&d| rank_at_least(g, side, set, d)).last().unwrap_or(0)
}

fn rank_gate() -> Outcome {
    let mut problems = Vec::new();
    let complete = generate(&GeneratorSpec::CompleteBipartite { n_left: 8, n_right: 8 }).unwrap();
    let value = splitting_rank(&complete, &complete.full_set(Side::Left)).unwrap().value;
    if value != 0 {
        problems.push(format!("complete -> {value}"));
    }
    let h3 = generate(&GeneratorSpec::HalfGraph { k: 3 }).unwrap();
    let value = splitting_rank(&h3, &h3.full_set(Side::Left)).unwrap().value;
    if value != 1 {
        problems.push(format!("HalfGraph(3) -> {value}"));
    }

    let mut specs: Vec<GeneratorSpec> = (1..=16).map(|k| GeneratorSpec::HalfGraph { k }).collect();
    for seed in 0..12 {
        let density = ratio(1 + (seed % 3) as i64, 4);
        specs.push(GeneratorSpec::random(8 + (seed as usize % 9), 16 - (seed as usize % 5), density, seed));
    }
    specs.extend((1..=4).map(|r| GeneratorSpec::rectangle_union(r, 16, 16, 2)));
    let mut compared = 0;
    for spec in &specs {
        let g = generate(spec).unwrap();
        let mut rng = Prng::new(compared as u64);
        for side in [Side::Left, Side::Right] {
            let n = g.size(side);
            let subset: Vec<usize> = (0..n).filter(|_| rng.below(4) != 0).collect();
            for members in [(0..n).collect::<Vec<_>>(), subset] {
                if members.is_empty() {
                    continue;
                }
                let start = VertexSet::from_indices(side, n, members.iter().copied()).unwrap();
                let fast = splitting_rank(&g, &start).unwrap().value;
                let slow = brute_rank(&g, side, &members);
                compared += 1;
                if fast != slow {
                    problems.push(format!("{spec:?} {side}: memoised {fast}, brute force {slow}"));
                }
            }
        }
    }
    outcome(problems.is_empty(), format!("{compared} brute-force comparisons, problems {problems:?}"))
}

fn random_pair_instance(seed: u64) -> (BipartiteGraph, Measure, Measure, VertexSet, VertexSet, BigRational) {
    let mut rng = Prng::new(seed);
    let n = 1 + rng.below(12) as usize;
    let m = 1 + rng.below(12) as usize;
    let density = rng.below(5);
    let g = BipartiteGraph::from_fn(n, m, |_, _| rng.below(4) < density).unwrap();
    let mut pick = |size: usize, side: Side| loop {
        let s = VertexSet::from_indices(side, size, (0..size).filter(|_| rng.coin())).unwrap();
        if !s.is_empty() {
            return s;
        }
    };
    let vi = pick(n, Side::Left);
    let wj = pick(m, Side::Right);
    let (mu, nu) = if rng.coin() {
        (Measure::uniform(Side::Left, n), Measure::uniform(Side::Right, m))
    } else {
        (
            Measure::from_weights(Side::Left, seeded_weights(n, &[], 9, rng.next_u64())).unwrap(),
            Measure::from_weights(Side::Right, seeded_weights(m, &[], 9, rng.next_u64())).unwrap(),
        )
    };
    let eps = ratio(1 + rng.below(29) as i64, 100);
    (g, mu, nu, vi, wj, eps)
}

fn oracle_gate() -> Outcome {
    let (mut agree, mut dense, mut sparse, mut none) = (0, 0, 0, 0);
    let mut first_bad = None;
    for seed in 0..10_000u64 {
        let (g, mu, nu, vi, wj, eps) = random_pair_instance(seed);
        let fast = classify_pair(&g, &mu, &nu, &vi, &wj, &eps);
        let slow = oracle_goodness(&g, &mu, &nu, &vi, &wj, &eps);
        if fast == slow {
            agree += 1;
        } else if first_bad.is_none() {
            first_bad = Some(seed);
        }
        match fast {
            Ok(Some(v)) if v.case == stablereg::PairCase::Dense => dense += 1,
            Ok(Some(_)) => sparse += 1,
            _ => none += 1,
        }
    }
    outcome(
        agree == 10_000,
        format!(
            "{agree}/10000 agree (dense {dense}, sparse {sparse}, unclassified {none}), first mismatch {first_bad:?}"
        ),
    )
}

fn plateau_gate() -> Outcome {
    let eps = ratio(1, 10);
    let mut rows = Vec::new();
    let mut pass = true;
    for seed in 0..5 {
        let parts = |n: usize| {
            let g = generate(&GeneratorSpec::rectangle_union(3, n, n, seed)).unwrap();
            let (mu, nu) = (counting_measure(&g, Side::Left), counting_measure(&g, Side::Right));
            decompose(&g, &mu, &nu, &eps, &DecomposeConfig::default()).unwrap().part_count()
        };
        let (small, large) = (parts(64), parts(512));
        pass &= large <= small;
        rows.push(format!("seed {seed}: {small} -> {large}"));
    }
    outcome(pass, format!("parts at n=64 -> n=512: {}", rows.join(", ")))
}

fn weighted_runs() -> Vec<Run> {
    let mut runs = Vec::new();
    for seed in 0..5 {
        let spec = GeneratorSpec::RectangleUnion {
            left_sizes: vec![32, 32],
            right_sizes: vec![32, 32],
            seed,
            perturbation: Some(Perturbation { left: 3, right: 3 }),
        };
        let gen = generate_detailed(&spec).unwrap();
        let mu = Measure::from_weights(Side::Left, seeded_weights(64, &gen.perturbed_left[..1], 5, 2 * seed)).unwrap();
        let nu =
            Measure::from_weights(Side::Right, seeded_weights(64, &gen.perturbed_right[..1], 5, 2 * seed + 1)).unwrap();
        for eps in epsilons() {
            let label = format!("weighted {} eps={eps}", serde_json::to_string(&spec).unwrap());
            runs.push(run_one(label, gen.graph.clone(), mu.clone(), nu.clone(), &eps));
        }
    }
    runs
}

fn weighted_gate(runs: &[Run]) -> Outcome {
    let theorem = theorem_gate(runs);
    let merges: usize = runs.iter().map(|r| r.partition.zero_mass_merges).sum();
    let runs_with_merge = runs.iter().filter(|r| r.partition.zero_mass_merges > 0).count();
    outcome(
        theorem.pass && merges > 0,
        format!("{}; zero-measure merges {merges} across {runs_with_merge} runs", theorem.detail),
    )
}

fn canonical_gate(runs: &[Run]) -> Outcome {
    let mut unfaithful = 0;
    let mut unstable = 0;
    for r in runs {
        let text = PartitionReport::from_partition(&r.partition).to_canonical_json();
        let back = PartitionReport::parse(&text).unwrap().to_partition(&r.g).unwrap();
        for side in [Side::Left, Side::Right] {
            for part in back.parts(side) {
                if part.formula.evaluate(&r.g, side).ok().as_ref() != Some(&part.members) {
                    unfaithful += 1;
                }
            }
        }
        let again = decompose(&r.g, &r.mu, &r.nu, &r.partition.epsilon, &DecomposeConfig::default()).unwrap();
        if PartitionReport::from_partition(&again).to_canonical_json() != text {
            unstable += 1;
        }
    }
    let cli = cli_round_trip();
    outcome(
        unfaithful == 0 && unstable == 0 && cli.pass,
        format!("{} reports, {unfaithful} unfaithful parts, {unstable} unstable reports; {}", runs.len(), cli.detail),
    )
}

/// Runs the binary twice per fixture and verifies each report.
fn cli_round_trip() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let bin = env!("CARGO_BIN_EXE_stablereg");
    let specs = [
        GeneratorSpec::HalfGraph { k: 8 },
        GeneratorSpec::rectangle_union(3, 64, 64, 1),
        GeneratorSpec::random(32, 32, ratio(1, 2), 4),
    ];
    let mut problems = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let graph = dir.path().join(format!("g{i}.json"));
        let spec_json = serde_json::to_string(spec).unwrap();
        let status = Command::new(bin).args(["gen", "--spec", &spec_json, "--output"]).arg(&graph).output().unwrap();
        if !status.status.success() {
            problems.push(format!("gen {i}"));
            continue;
        }
        let decompose = || {
            Command::new(bin).args(["decompose", "--epsilon", "1/10", "--input"]).arg(&graph).output().unwrap().stdout
        };
        let (a, b) = (decompose(), decompose());
        if a != b || a.is_empty() {
            problems.push(format!("fixture {i}: reports differ"));
        }
        let report = dir.path().join(format!("r{i}.json"));
        std::fs::write(&report, &a).unwrap();
        let verify =
            Command::new(bin).arg("verify").arg("--input").arg(&graph).arg("--report").arg(&report).output().unwrap();
        if verify.status.code() != Some(0) {
            problems.push(format!("fixture {i}: verify exit {:?}", verify.status.code()));
        }
    }
    outcome(problems.is_empty(), format!("cli byte-identical and verified on {} fixtures {problems:?}", specs.len()))
}

fn main() {
    let mut stdout = std::io::stdout().lock();
    let mut line = |id: &str, hard: bool, o: &Outcome| {
        let status = match (o.pass, hard) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (soft gate)",
        };
        writeln!(stdout, "criterion {id}: {status} - {}", o.detail).unwrap();
        stdout.flush().unwrap();
        o.pass || !hard
    };

    let runs = criterion_one_runs();
    let weighted = weighted_runs();
    let all: Vec<Run> = runs.into_iter().chain(weighted).collect();
    let split = all.len() - 15;
    let (base, weighted) = all.split_at(split);

    let results = [
        line("1 theorem conclusion", true, &theorem_gate(base)),
        line("2 mutual exclusivity", true, &exclusivity_gate(all.as_slice())),
        line("3 delta-regularity", true, &delta_gate(base)),
        line("4 ladder oracle", true, &ladder_gate()),
        line("5 splitting rank", true, &rank_gate()),
        line("6 oracle cross-validation", true, &oracle_gate()),
        line("7 size independence", false, &plateau_gate()),
        line("8 weighted measures", true, &weighted_gate(weighted)),
        line("9 faithfulness and canonicality", true, &canonical_gate(all.as_slice())),
    ];
    if results.iter().any(|ok| !ok) {
        std::process::exit(1);
    }
}
