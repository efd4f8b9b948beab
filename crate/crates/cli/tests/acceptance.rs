//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed. Limits are pinned below.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hgd_core::embedding::{self, EmbeddedGraph, EmbeddingConfig, TreeStrategy};
use hgd_core::genfun;
use hgd_core::overlap::{self, EnumerationConfig, Family};
use hgd_core::{compute, recurrence, Engine, EngineConfig, Execution, GenusPolynomial, ParamTuple};

const GOLDEN_LIMIT: Duration = Duration::from_secs(1);
const MATRIX_BITS: u64 = 26;
const MATRIX_TUPLE_LIMIT_1: Duration = Duration::from_secs(300);
const MATRIX_TUPLE_LIMIT_8: Duration = Duration::from_secs(60);
const EMBEDDING_SIZE: u64 = 24;
const EMBEDDING_TUPLE_LIMIT: Duration = Duration::from_secs(120);
const CLOSED_LIMIT: Duration = Duration::from_secs(10);
const GENFUN_LIMIT: Duration = Duration::from_secs(30);
/// Criteria 2 and 3 already ran on one worker; these are compared against them.
const WORKERS: [usize; 2] = [2, 8];

type Outcome = Result<String, String>;

fn t(m: &[u32]) -> ParamTuple {
    ParamTuple::new(m.to_vec()).unwrap()
}

fn doubled(c: &[u64]) -> GenusPolynomial {
    GenusPolynomial::from_u64s(c).scale(&2u32.into())
}

fn workers(n: usize) -> Execution {
    Execution::with_threads(Some(n))
}

/// All tuples of length `k` with entries in `1..=max` and sum at most `total`.
fn tuples(k: usize, max: u32, total: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                (1..=max).filter_map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    (q.iter().sum::<u32>() <= total).then_some(q)
                })
            })
            .collect();
    }
    out
}

/// Free bits `3(sum m + k - 1)` for `k >= 2`; the ladder `(m)` has `m + 2`
/// independent cycles and so `3(m + 1)` bits.
fn overlap_bits(m: &[u32]) -> u64 {
    let s: u64 = m.iter().map(|&x| u64::from(x)).sum();
    if m.len() == 1 {
        3 * (s + 1)
    } else {
        3 * (s + m.len() as u64 - 1)
    }
}

/// Spine vertices carrying a pendant leaf.
fn spine(m: &[u32]) -> u64 {
    let s: u64 = m.iter().map(|&x| u64::from(x)).sum();
    if m.len() == 1 {
        s
    } else {
        s + m.len() as u64 - 2
    }
}

/// `|V| + beta` for the graph with spine length `l`.
fn embedding_size(m: &[u32]) -> u64 {
    let l = spine(m);
    (2 * l + 2) + (l + 2)
}

struct Suite {
    failed: usize,
    /// Every polynomial computed along the way, for the cardinality check.
    seen: Vec<(ParamTuple, GenusPolynomial)>,
    matrix_runs: Vec<(ParamTuple, GenusPolynomial)>,
    embedding_runs: Vec<(ParamTuple, GenusPolynomial)>,
}

impl Suite {
    fn run(&mut self, id: u32, name: &str, f: impl FnOnce(&mut Suite) -> Outcome) {
        let start = Instant::now();
        let outcome = match panic::catch_unwind(AssertUnwindSafe(|| f(self))) {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id}. {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                self.failed += 1;
                println!("FAIL {id}. {name} ({secs:.2}s): {detail}");
            }
        }
    }

    fn record(&mut self, p: &ParamTuple, e: &GenusPolynomial) {
        self.seen.push((p.clone(), e.clone()));
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn golden(s: &mut Suite) -> Outcome {
    let cases: [(&str, &[u64]); 7] = [
        ("1,1", &[1, 11, 80, 212, 208]),
        ("1,2", &[1, 15, 156, 724, 1728, 1472]),
        ("2,2", &[1, 19, 248, 1668, 6704, 13504, 10624]),
        ("2,4", &[1, 27, 544, 5876, 41424, 185472, 520320, 813056, 530432]),
        ("1,1,1", &[1, 19, 264, 1748, 6800, 13440, 10496]),
        ("1,2,3", &[1, 31, 700, 9028, 79840, 465280, 1800832, 4425216, 6236160, 3760128]),
        ("2,2,2", &[1, 31, 684, 8756, 75968, 443456, 1750528, 4397056, 6287360, 3813376]),
    ];
    let start = Instant::now();
    for (m, half) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_hgd"))
            .args(["dist", "--m", m, "--engine", "recurrence", "--format", "json"])
            .env_remove("HGD_CACHE_DIR")
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("dist --m {m} exited with {}", out.status));
        }
        let got: GenusPolynomial = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let want = doubled(half);
        if got != want {
            return Err(format!("E({m}) = {got}, expected {want}"));
        }
        s.record(&m.parse().unwrap(), &got);
    }
    let elapsed = start.elapsed();
    if elapsed >= GOLDEN_LIMIT {
        return Err(format!("7 polynomials took {elapsed:?} >= {GOLDEN_LIMIT:?}"));
    }
    Ok(format!("7 polynomials exact in {elapsed:.2?}"))
}

fn matrix_oracle(s: &mut Suite) -> Outcome {
    let mut list: Vec<Vec<u32>> = (1..=8).map(|m| vec![m]).collect();
    for k in 2..=5 {
        list.extend(tuples(k, 8, 8));
    }
    list.retain(|m| overlap_bits(m) <= MATRIX_BITS);
    let mut slowest = Duration::ZERO;
    for m in &list {
        let p = t(m);
        if p.k() >= 2 && p.delta_bits() != overlap_bits(m) {
            return Err(format!("{p:?}: layout has {} bits, expected {}", p.delta_bits(), overlap_bits(m)));
        }
        let family = if p.k() == 1 { Family::Phi(m[0] as usize + 2) } else { Family::Delta(p.clone()) };
        let cfg = EnumerationConfig { budget_bits: MATRIX_BITS as u32, execution: workers(1) };
        let (delta, took) = timed(|| overlap::enumerate_distribution(&family, &cfg));
        let e = delta.map_err(|e| format!("{p:?}: {e}"))?.scale(&2u32.into());
        if took >= MATRIX_TUPLE_LIMIT_1 {
            return Err(format!("{p:?} took {took:?} single-threaded"));
        }
        slowest = slowest.max(took);
        let want = recurrence::euler_genus_poly(&p).map_err(|e| e.to_string())?;
        if e != want {
            return Err(format!("{p:?}: 2 delta = {e}, recurrence = {want}"));
        }
        s.record(&p, &e);
        s.matrix_runs.push((p, e));
    }
    Ok(format!("{} tuples (<= {MATRIX_BITS} bits), slowest {slowest:.2?} on 1 worker", list.len()))
}

fn embedding_oracle(s: &mut Suite) -> Outcome {
    let mut list: Vec<Vec<u32>> = (1..=6).map(|m| vec![m]).collect();
    for k in 2..=4 {
        list.extend(tuples(k, 6, 6));
    }
    list.retain(|m| embedding_size(m) <= EMBEDDING_SIZE);
    for required in [&[1u32, 1][..], &[1, 2], &[2, 1], &[2, 2], &[1, 1, 1]] {
        if !list.iter().any(|m| m == required) {
            return Err(format!("{required:?} missing from the tuple list"));
        }
    }
    let mut slowest = Duration::ZERO;
    for m in &list {
        let p = t(m);
        let cfg = EmbeddingConfig { budget_bits: EMBEDDING_SIZE as u32, execution: workers(1), ..Default::default() };
        let (dist, took) = timed(|| embedding::embedding_distribution(&p, &cfg));
        let e = dist.map_err(|e| format!("{p:?}: {e}"))?;
        if took >= EMBEDDING_TUPLE_LIMIT {
            return Err(format!("{p:?} took {took:?}"));
        }
        slowest = slowest.max(took);
        let want = recurrence::euler_genus_poly(&p).map_err(|e| e.to_string())?;
        if e != want {
            return Err(format!("{p:?}: embeddings = {e}, recurrence = {want}"));
        }
        s.record(&p, &e);
        s.embedding_runs.push((p, e));
    }
    Ok(format!("{} tuples (|V| + beta <= {EMBEDDING_SIZE}), slowest {slowest:.2?}", list.len()))
}

fn tree_independence(_: &mut Suite) -> Outcome {
    for m in [&[1u32, 1][..], &[2, 2], &[1, 1, 1]] {
        let p = t(m);
        let bfs = EmbeddedGraph::build_with_tree(&p, TreeStrategy::BfsFromStart).map_err(|e| e.to_string())?;
        let dfs = EmbeddedGraph::build_with_tree(&p, TreeStrategy::DfsFromEnd).map_err(|e| e.to_string())?;
        if bfs.cotree() == dfs.cotree() {
            return Err(format!("{p:?}: both strategies chose the same tree"));
        }
        let run = |tree| {
            let cfg = EmbeddingConfig { tree, execution: workers(1), ..Default::default() };
            embedding::embedding_distribution(&p, &cfg).map_err(|e| e.to_string())
        };
        let (a, b) = (run(TreeStrategy::BfsFromStart)?, run(TreeStrategy::DfsFromEnd)?);
        if a != b {
            return Err(format!("{p:?}: bfs {a} != dfs {b}"));
        }
    }
    Ok("bfs and dfs trees give identical distributions for (1,1), (2,2), (1,1,1)".into())
}

fn closed_forms(s: &mut Suite) -> Outcome {
    let start = Instant::now();
    let mut list = tuples(2, 5, 15);
    list.extend(tuples(3, 5, 15));
    for m in &list {
        let p = t(m);
        let e = recurrence::euler_genus_poly(&p).map_err(|e| e.to_string())?;
        for j in 0..=2u32 {
            let c = recurrence::closed_form_eps(&p, j).map_err(|e| format!("{p:?} genus {j}: {e}"))?;
            if c != e.coeff(j as usize) {
                return Err(format!("{p:?} genus {j}: closed form {c}, recurrence {}", e.coeff(j as usize)));
            }
        }
        s.record(&p, &e);
    }
    for (m, j, want) in [(&[1u32, 1][..], 1, 22u32), (&[1, 2, 3], 2, 1400)] {
        let c = recurrence::closed_form_eps(&t(m), j).map_err(|e| e.to_string())?;
        if c != want.into() {
            return Err(format!("{m:?} genus {j}: {c} != {want}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= CLOSED_LIMIT {
        return Err(format!("took {elapsed:?} >= {CLOSED_LIMIT:?}"));
    }
    Ok(format!("{} tuples x genus 0..=2 in {elapsed:.2?}", list.len()))
}

fn generating_functions(s: &mut Suite) -> Outcome {
    let start = Instant::now();
    let mut list = tuples(2, 5, 10);
    list.extend(tuples(3, 3, 9));
    list.extend(tuples(4, 2, 8));
    let cfg = EngineConfig::default();
    for m in &list {
        let p = t(m);
        let e = compute(Engine::Genfun, &p, &cfg).map_err(|e| format!("{p:?}: {e}"))?;
        let want = recurrence::euler_genus_poly(&p).map_err(|e| e.to_string())?;
        if e != want {
            return Err(format!("{p:?}: series {e}, recurrence {want}"));
        }
        s.record(&p, &e);
    }
    let phi = genfun::phi_series(15, 17).map_err(|e| e.to_string())?;
    let lstar = genfun::lstar_series(15, 17).map_err(|e| e.to_string())?;
    for m in 1..=15u32 {
        // phi is indexed by matrix dimension and starts at 2
        if m >= 2 {
            let got = phi.genus_coeff(&[i64::from(m)]).map_err(|e| e.to_string())?;
            let want = recurrence::phi_poly(m).map_err(|e| e.to_string())?;
            if got != want {
                return Err(format!("phi_{m}: series {got}, recurrence {want}"));
            }
        }
        let got = lstar.genus_coeff(&[i64::from(m)]).map_err(|e| e.to_string())?;
        let want = recurrence::l_poly(m).map_err(|e| e.to_string())?.scale(&(1u64 << m).into());
        if got != want {
            return Err(format!("2^{m} L_{m}: series {got}, recurrence {want}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= GENFUN_LIMIT {
        return Err(format!("took {elapsed:?} >= {GENFUN_LIMIT:?}"));
    }
    Ok(format!("{} tuples plus phi and L* for m <= 15 in {elapsed:.2?}", list.len()))
}

fn isomorphisms(s: &mut Suite) -> Outcome {
    let e = |m: &[u32]| recurrence::euler_genus_poly(&t(m)).map_err(|err| format!("{m:?}: {err}"));
    let mut checks = 0;
    for k in 1..=4 {
        for m in tuples(k, 4, 16) {
            let base = e(&m)?;
            let mut rev = m.clone();
            rev.reverse();
            if e(&rev)? != base {
                return Err(format!("{m:?} differs from its reverse"));
            }
            s.record(&t(&m), &base);
            checks += 1;
            if k == 4 {
                continue;
            }
            // append a 0 or 1 and compare with the rewritten shorter tuple
            let mut bumped = |tail: u32| -> Result<(), String> {
                let mut long = m.clone();
                long.push(tail);
                let mut short = m.clone();
                *short.last_mut().unwrap() += if k == 1 { tail } else { tail + 1 };
                let got = e(&long)?;
                if got != e(&short)? {
                    return Err(format!("{long:?} differs from {short:?}"));
                }
                s.record(&t(&long), &got);
                checks += 1;
                Ok(())
            };
            bumped(0)?;
            bumped(1)?;
        }
    }
    Ok(format!("{checks} identities over k <= 4, m_i <= 4"))
}

fn cardinalities(s: &mut Suite) -> Outcome {
    for (p, e) in &s.seen {
        let m = p.as_slice();
        let bits = overlap_bits(m);
        if e.coeff(0) != 2u32.into() {
            return Err(format!("{p:?}: constant term {}", e.coeff(0)));
        }
        let want = pow2_decimal(bits + 1);
        if e.coefficient_sum().to_string() != want {
            return Err(format!("{p:?}: coefficient sum {} != 2^{}", e.coefficient_sum(), bits + 1));
        }
    }
    let mut lambdas = 0;
    for k in 2..=4 {
        for m in tuples(k, 4, 16) {
            let p = t(&m);
            let l = recurrence::lambda_poly(&p).map_err(|e| format!("{p:?}: {e}"))?;
            let s: u64 = m.iter().map(|&x| u64::from(x)).sum();
            let bits = 3 * s - u64::from(*m.last().unwrap()) + 3 * k as u64 - 6;
            if l.coefficient_sum().to_string() != pow2_decimal(bits) {
                return Err(format!("lambda {p:?}: coefficient sum {} != 2^{bits}", l.coefficient_sum()));
            }
            lambdas += 1;
        }
    }
    Ok(format!("{} polynomials E and {lambdas} polynomials lambda", s.seen.len()))
}

/// Decimal expansion of `2^n`, done by hand so it does not lean on the
/// library's big integers.
fn pow2_decimal(n: u64) -> String {
    let mut digits = vec![1u8];
    for _ in 0..n {
        let mut carry = 0;
        for d in digits.iter_mut() {
            let v = *d * 2 + carry;
            *d = v % 10;
            carry = v / 10;
        }
        if carry > 0 {
            digits.push(carry);
        }
    }
    digits.iter().rev().map(|d| char::from(b'0' + d)).collect()
}

fn determinism(s: &mut Suite) -> Outcome {
    let mut slowest_8 = Duration::ZERO;
    for (p, want) in &s.matrix_runs {
        let family = if p.k() == 1 { Family::Phi(p.as_slice()[0] as usize + 2) } else { Family::Delta(p.clone()) };
        for n in WORKERS {
            let cfg = EnumerationConfig { budget_bits: MATRIX_BITS as u32, execution: workers(n) };
            let (got, took) = timed(|| overlap::enumerate_distribution(&family, &cfg));
            let got = got.map_err(|e| e.to_string())?.scale(&2u32.into());
            if &got != want {
                return Err(format!("matrix {p:?} differs with {n} workers"));
            }
            if n == 8 {
                if took >= MATRIX_TUPLE_LIMIT_8 {
                    return Err(format!("matrix {p:?} took {took:?} with 8 workers"));
                }
                slowest_8 = slowest_8.max(took);
            }
        }
    }
    for (p, want) in &s.embedding_runs {
        for n in WORKERS {
            let cfg = EmbeddingConfig { budget_bits: EMBEDDING_SIZE as u32, execution: workers(n), ..Default::default() };
            let got = embedding::embedding_distribution(p, &cfg).map_err(|e| e.to_string())?;
            if &got != want {
                return Err(format!("embedding {p:?} differs with {n} workers"));
            }
        }
    }
    Ok(format!(
        "{} matrix and {} embedding runs identical for 1, 2 and 8 workers; slowest matrix run on 8 workers {slowest_8:.2?}",
        s.matrix_runs.len(),
        s.embedding_runs.len()
    ))
}

fn main() -> ExitCode {
    let mut s = Suite { failed: 0, seen: Vec::new(), matrix_runs: Vec::new(), embedding_runs: Vec::new() };
    s.run(1, "golden examples", golden);
    s.run(2, "matrix enumeration equals recurrence", matrix_oracle);
    s.run(3, "embedding enumeration equals recurrence", embedding_oracle);
    s.run(4, "spanning-tree independence", tree_independence);
    s.run(5, "closed forms for genus 0, 1, 2", closed_forms);
    s.run(6, "generating functions", generating_functions);
    s.run(7, "isomorphism identities", isomorphisms);
    s.run(8, "cardinality invariants", cardinalities);
    s.run(9, "determinism across worker counts", determinism);
    if s.failed == 0 {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of 9 criteria failed", s.failed);
        ExitCode::FAILURE
    }
}
