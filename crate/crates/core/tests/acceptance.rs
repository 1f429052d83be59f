//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Every comparison is exact.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use multicomp_core::{
    build_bh_codebook, build_codebook, confusable, decode, is_dyck, is_h_mc_code, layout, mix, padded_len,
    prefix_multiset, rds_profile, recover_sum, separate_prefixes, suffix_multiset, verify_bh, BinaryString,
    Codebook, Composition, CompositionMultiset, Flavor,
};
use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn bs(text: &str) -> BinaryString {
    text.parse().unwrap()
}

fn set(items: &[&str]) -> Vec<BinaryString> {
    items.iter().map(|s| bs(s)).collect()
}

fn subsets(size: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, size: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..size {
            cur.push(i);
            go(i + 1, size, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, size, k, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Decodes the mixture of every subset of size `1..=h` and counts mismatches.
fn round_trip_all(cb: &Codebook) -> (usize, usize) {
    let (mut total, mut failures) = (0, 0);
    for k in 1..=cb.h() {
        for subset in subsets(cb.len(), k) {
            total += 1;
            let strings: Vec<BinaryString> = subset.iter().map(|&i| cb.codewords()[i].clone()).collect();
            let ok = mix(&strings, cb.h())
                .and_then(|doc| decode(cb, &doc))
                .map(|d| d.indices == subset)
                .unwrap_or(false);
            if !ok {
                failures += 1;
            }
        }
    }
    (total, failures)
}

fn criterion_1() -> Outcome {
    let cb = build_codebook(8, 2).unwrap();
    let lay = cb.layout();
    if (cb.len(), lay.n, lay.big_n) != (255, 16, 52) {
        return outcome(false, format!("shape ({}, {}, {})", cb.len(), lay.n, lay.big_n));
    }
    let (total, failures) = round_trip_all(&cb);
    let expected = 32_385 + 255;
    outcome(
        total == expected && failures == 0,
        format!("m=8 h=2: {total}/{expected} subsets, {failures} failures"),
    )
}

fn criterion_2() -> Outcome {
    let cb = build_codebook(5, 3).unwrap();
    let expected: u64 = (1..=3).map(|k| binomial(31, k)).sum();
    let (total, failures) = round_trip_all(&cb);
    outcome(
        cb.len() == 31 && total as u64 == expected && failures == 0,
        format!(
            "m=5 h=3: {} codewords, {total}/{expected} subsets, {failures} failures",
            cb.len()
        ),
    )
}

fn prefix_union(strings: &[BinaryString]) -> CompositionMultiset {
    let mut union = CompositionMultiset::new();
    for s in strings {
        union.extend_from(&prefix_multiset(s).unwrap());
    }
    union
}

fn column_sum(strings: &[BinaryString]) -> Vec<u32> {
    let mut sum = vec![0u32; strings[0].len()];
    for s in strings {
        for (acc, &b) in sum.iter_mut().zip(s.bits()) {
            *acc += u32::from(b);
        }
    }
    sum
}

fn criterion_3(rng: &mut ChaCha8Rng) -> Outcome {
    let fixture = set(&["0101101", "0110001"]);
    let t = recover_sum(&prefix_union(&fixture), 7).unwrap();
    let fixture_ok = t.values == [0, 2, 1, 1, 1, 0, 2] && t.values == column_sum(&fixture);

    let mut mismatches = 0;
    for _ in 0..10_000 {
        let len = rng.random_range(1..=64);
        let h_bar = rng.random_range(1..=4usize).min(1 << len.min(2));
        let mut strings = BTreeSet::new();
        while strings.len() < h_bar {
            strings.insert(BinaryString::from_bools((0..len).map(|_| rng.random::<bool>())));
        }
        let strings: Vec<BinaryString> = strings.into_iter().collect();
        match recover_sum(&prefix_union(&strings), len) {
            Ok(t) if t.values == column_sum(&strings) && t.h_bar == h_bar => {}
            _ => mismatches += 1,
        }
    }
    outcome(
        fixture_ok && mismatches == 0,
        format!(
            "10000 random collections, {mismatches} mismatches; fixture t = {:?}",
            t.values
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut violations = Vec::new();
    let mut checked = 0;
    for h in [2, 3] {
        for m in 2..=8 {
            let cb = match build_codebook(m, h) {
                Ok(cb) => cb,
                Err(e) => {
                    violations.push(format!("m={m} h={h}: {e}"));
                    continue;
                }
            };
            let lay = cb.layout();
            let b = lay.block_len as i64;
            for i in 0..cb.len() {
                checked += 1;
                let a = cb.anatomy(i).unwrap();
                let u = rds_profile(&a.balanced.u).unwrap();
                let v = rds_profile(&a.v).unwrap();
                let block_ends = (1..=lay.num_blocks).map(|j| u.values()[j * lay.block_len - 1]);
                let failed = [
                    ("block end", block_ends.map(i64::abs).max().unwrap() > b),
                    ("|R(u)|", 2 * u.max_abs() > 3 * b),
                    ("R(v) > 0", v.min() <= 0),
                    ("R(v) max", v.max() > 5 * b + 1),
                    ("Dyck", !is_dyck(&cb.codewords()[i])),
                ];
                for (name, bad) in failed {
                    if bad {
                        violations.push(format!("m={m} h={h} i={i}: {name}"));
                    }
                }
            }
        }
    }
    let mut detail = format!(
        "{checked} codewords (m 2..=8, h 2 and 3), {} violations",
        violations.len()
    );
    if let Some(first) = violations.first() {
        detail.push_str(&format!(", first: {first}"));
    }
    outcome(violations.is_empty(), detail)
}

/// Compact composition notation: `01^2` is one 0 and two 1s, `0^21` two 0s and one 1.
fn composition(text: &str) -> Composition {
    let (mut zeros, mut ones) = (0, 0);
    let mut chars = text.chars().peekable();
    while let Some(symbol) = chars.next() {
        let mut count = 1;
        if chars.peek() == Some(&'^') {
            chars.next();
            count = chars.next().unwrap().to_digit(10).unwrap();
        }
        match symbol {
            '0' => zeros += count,
            _ => ones += count,
        }
    }
    Composition::new(zeros, ones).unwrap()
}

fn criterion_5() -> Outcome {
    let pair_a = set(&["0101101", "0110001"]);
    let pair_b = set(&["0101001", "0110101"]);
    let prefix_confusable = confusable(&pair_a, &pair_b, Flavor::PrefixOnly).unwrap();
    let displayed = [
        "0", "0", "01", "01", "0^21", "01^2", "0^21^2", "0^21^2", "0^21^3", "0^31^2", "0^31^3", "0^41^2",
        "0^31^4", "0^41^3",
    ];
    let expected: CompositionMultiset = displayed.iter().map(|s| composition(s)).collect();
    let union = prefix_union(&pair_a);
    let union_ok = union == expected && union.len() == 14;
    let full_distinct = !confusable(&set(&["011", "000"]), &set(&["001", "010"]), Flavor::Full).unwrap();
    outcome(
        prefix_confusable && union_ok && full_distinct,
        format!(
            "prefix-only confusable {prefix_confusable}, 14-entry union matches {union_ok}, \
             {{011,000}} vs {{001,010}} distinguishable {full_distinct}"
        ),
    )
}

/// `log2(a)/Na` against `log2(b)/Nb`, decided as `a^Nb` against `b^Na`.
fn rate_less(a: (u64, usize), b: (u64, usize)) -> bool {
    BigUint::from(a.0).pow(b.1 as u32) < BigUint::from(b.0).pow(a.1 as u32)
}

fn rate_rows(h: usize, ms: &[u32]) -> Vec<(u64, usize)> {
    ms.iter()
        .map(|&m| {
            let sidon = build_bh_codebook(m, h).unwrap();
            (sidon.len() as u64, layout(padded_len(sidon.n())).unwrap().big_n)
        })
        .collect()
}

fn criterion_6() -> Outcome {
    let ms = [8, 10, 12, 14];
    let below = |rows: &[(u64, usize)], h: u32| {
        rows.iter()
            .all(|&(size, n)| BigUint::from(size).pow(h) < BigUint::from(1u8) << n)
    };
    let two = rate_rows(2, &ms);
    let three = rate_rows(3, &ms);
    let increasing = two.windows(2).all(|w| rate_less(w[0], w[1]));
    let below_two = below(&two, 2);
    let below_three = below(&three, 3);
    let show = |rows: &[(u64, usize)]| {
        rows.iter()
            .map(|&(size, n)| format!("{:.4}", (size as f64).log2() / n as f64))
            .collect::<Vec<_>>()
            .join(", ")
    };
    outcome(
        increasing && below_two && below_three,
        format!(
            "h=2 rates over m {ms:?}: [{}] strictly increasing {increasing}, below 1/2 {below_two}; \
             h=3: [{}] below 1/3 {below_three}",
            show(&two),
            show(&three)
        ),
    )
}

fn criterion_7(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let mut mc_failures = 0;
    let mut samples = 0;
    for m in 5..=8 {
        let cb = build_codebook(m, 2).unwrap();
        for _ in 0..5 {
            let pick: Vec<BinaryString> = sample(rng, cb.len(), 20)
                .into_iter()
                .map(|i| cb.codewords()[i].clone())
                .collect();
            samples += 1;
            if is_h_mc_code(&pick, 2).map(|w| w.is_some()).unwrap_or(true) {
                mc_failures += 1;
            }
        }
    }
    let mc_secs = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let mut bh_failures = 0;
    let mut books = 0;
    for h in [2, 3] {
        for m in 2..=5 {
            let sidon = build_bh_codebook(m, h).unwrap();
            books += 1;
            if !verify_bh(sidon.strings(), h).map(|v| v.is_ok()).unwrap_or(false) {
                bh_failures += 1;
            }
        }
    }
    let bh_secs = start.elapsed().as_secs_f64();
    outcome(
        mc_failures == 0 && bh_failures == 0 && mc_secs < 60.0 && bh_secs < 60.0,
        format!(
            "is_h_mc_code on {samples} 20-codeword samples: {mc_failures} failures ({mc_secs:.1}s); \
             verify_bh on {books} codebooks m<=5: {bh_failures} failures ({bh_secs:.1}s)"
        ),
    )
}

fn criterion_8(rng: &mut ChaCha8Rng) -> Outcome {
    let mut misclassified = 0;
    let mut draws = 0u64;
    for _ in 0..10_000 {
        let len = 2 * rng.random_range(1..=32);
        let s = loop {
            draws += 1;
            let s = BinaryString::from_bools((0..len).map(|_| rng.random::<bool>()));
            if is_dyck(&s) {
                break s;
            }
        };
        let ok = mix(std::slice::from_ref(&s), 1)
            .and_then(|doc| separate_prefixes(&doc))
            .map(|sep| {
                sep.h_bar == 1
                    && sep.prefixes == prefix_multiset(&s).unwrap()
                    && sep.suffixes == suffix_multiset(&s).unwrap()
            })
            .unwrap_or(false);
        if !ok {
            misclassified += 1;
        }
    }
    outcome(
        misclassified == 0,
        format!("10000 Dyck strings ({draws} draws), {misclassified} misclassified"),
    )
}

type Criterion = Box<dyn FnOnce(&mut ChaCha8Rng) -> Outcome>;

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d63);
    let criteria: Vec<(&str, Criterion)> = vec![
        ("exhaustive round trip h=2", Box::new(|_| criterion_1())),
        ("exhaustive round trip h=3", Box::new(|_| criterion_2())),
        ("integer sum from prefixes", Box::new(criterion_3)),
        ("balancing inequalities", Box::new(|_| criterion_4())),
        ("worked example regressions", Box::new(|_| criterion_5())),
        ("rate trend", Box::new(|_| criterion_6())),
        ("oracle agreement", Box::new(criterion_7)),
        ("prefix/suffix separation", Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run(&mut rng);
        let status = if result.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} {}. {name}: {} [{:.1}s]",
            i + 1,
            result.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!result.passed);
    }
    println!("acceptance: {failed} of 8 criteria failed");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
