//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tripknot::bracket_oracle::jones_reference;
use tripknot::gauss_code::{CrossingPermutation, SignedGaussCode};
use tripknot::gf2_matrix::Gf2Matrix;
use tripknot::jones_engine::{
    jones, jones_from_trip, split_state, state_sum_with, verify_multiplicative, Calibration,
    EnumerationOrder, State, SumOptions,
};
use tripknot::knot_table::{all_entries, lookup};
use tripknot::laurent_poly::LaurentPoly;
use tripknot::trip_matrix::{delta_equivalent, BlockPartition, TripMatrix};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn matrix(rows: &str) -> TripMatrix {
    TripMatrix::from_matrix(Gf2Matrix::parse(rows).unwrap()).unwrap()
}

fn all_ones(n: usize) -> TripMatrix {
    TripMatrix::from_matrix(Gf2Matrix::from_fn(n, |_, _| true)).unwrap()
}

fn t_poly(terms: &[(i32, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (4 * e, c))).unwrap()
}

fn random_code(n: usize, rng: &mut ChaCha8Rng) -> SignedGaussCode {
    let mut slots: Vec<usize> = (1..=n).flat_map(|i| [i, i]).collect();
    slots.shuffle(rng);
    let signs: Vec<char> = (0..n).map(|_| if rng.gen() { '+' } else { '-' }).collect();
    let over_first: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut seen = vec![false; n + 1];
    let tokens: Vec<String> = slots
        .iter()
        .map(|&i| {
            let first = !seen[i];
            seen[i] = true;
            let layer = if first == over_first[i - 1] { 'O' } else { 'U' };
            format!("{layer}{i}{}", signs[i - 1])
        })
        .collect();
    tokens.join(" ").parse().unwrap()
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> CrossingPermutation {
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(rng);
    CrossingPermutation::from_images(&images).unwrap()
}

fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> TripMatrix {
    let mut m = Gf2Matrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            if rng.gen() {
                m.set(i, j, true);
                m.set(j, i, true);
            }
        }
    }
    TripMatrix::from_matrix(m).unwrap()
}

const FIGURE_EIGHT: &str = "0011\n0011\n1110\n1101";
const RELABELED_FIGURE_EIGHT: &str = "1110\n1001\n1001\n0111";
const COMPOSITE: &str = "1110000000
1110000000
1110000000
0000011000
0000011000
0001110000
0001101000
0000000111
0000000111
0000000111";

fn figure_eight_matrix() -> Outcome {
    let code = &lookup("figure8").unwrap().code;
    let t = TripMatrix::build(code);
    ensure!(
        t == matrix(FIGURE_EIGHT),
        "built matrix\n{}\ndiffers",
        t.matrix()
    );
    Ok(format!(
        "rows {}",
        t.matrix().to_string().replace('\n', "/")
    ))
}

fn relabeling() -> Outcome {
    let first = matrix(FIGURE_EIGHT);
    let second = matrix(RELABELED_FIGURE_EIGHT);
    let swapped = first.delta_swap(1, 3).unwrap();
    ensure!(swapped == second, "delta(1,3) gave\n{}", swapped.matrix());
    let witness = delta_equivalent(&first, &second).ok_or("not reported equivalent")?;
    ensure!(
        witness.to_string() == "(1 3)",
        "witness {witness} instead of (1 3)"
    );
    Ok(format!("witness {witness}"))
}

fn composite_blocks() -> Outcome {
    let expected = matrix(COMPOSITE);
    let composed = TripMatrix::block_compose(&[all_ones(3), matrix(FIGURE_EIGHT), all_ones(3)]);
    ensure!(composed == expected, "composed matrix differs");
    let table = TripMatrix::build(&lookup("trefoil+#figure8#trefoil+").unwrap().code);
    ensure!(
        table == expected,
        "table composite builds a different matrix"
    );
    let sizes_of = |t: &TripMatrix| {
        let mut s = t.block_decompose().sizes();
        s.sort_unstable();
        s
    };
    ensure!(
        sizes_of(&expected) == [3, 3, 4],
        "decomposition {:?}",
        expected.block_decompose().sizes()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let p = random_perm(10, &mut rng);
        let permuted = expected.apply_permutation(&p).unwrap();
        ensure!(
            sizes_of(&permuted) == [3, 3, 4],
            "permutation {p} breaks block sizes"
        );
    }
    Ok("block sizes {3,4,3} on the original and 20 relabelings".into())
}

fn calibration_anchor() -> Outcome {
    let trefoil = all_ones(3);
    let integral: Vec<(Calibration, LaurentPoly)> = Calibration::candidates()
        .into_iter()
        .map(|c| (c, jones_from_trip(&trefoil, c).unwrap()))
        .filter(|(_, v)| v.is_integral_in_t())
        .collect();
    ensure!(
        integral.len() == 1,
        "{} signs give integral powers",
        integral.len()
    );
    let (cal, v) = &integral[0];
    let anchor = t_poly(&[(-4, -1), (-3, 1), (-1, 1)]);
    ensure!(*v == anchor, "anchor value {v}");
    ensure!(
        *cal == Calibration::PINNED,
        "pinned sign disagrees with derived sign"
    );
    ensure!(
        Calibration::derive().ok() == Some(*cal),
        "derive() disagrees"
    );
    Ok(format!("epsilon = {}, V = {v}", cal.writhe_exponent_sign()))
}

fn figure_eight_jones() -> Outcome {
    let v = jones(&lookup("figure8").unwrap().code).unwrap();
    let expected = t_poly(&[(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]);
    ensure!(v == expected, "got {v}");
    Ok(format!("V = {v}"))
}

fn oracle_equivalence() -> Outcome {
    let entries = all_entries();
    for e in entries {
        let v = jones(&e.code).unwrap();
        let r = jones_reference(&e.code).unwrap();
        ensure!(v == r, "{}: engine {v}, oracle {r}", e.name);
        ensure!(
            v == e.expected_jones,
            "{}: engine {v}, table {}",
            e.name,
            e.expected_jones
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let pairs: Vec<(usize, usize)> = (0..entries.len())
        .flat_map(|a| (0..entries.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| entries[a].code.n() + entries[b].code.n() <= 14)
        .collect();
    for _ in 0..50 {
        let &(a, b) = pairs.choose(&mut rng).unwrap();
        let left = &entries[a].code;
        let pos = rng.gen_range(0..=left.word().len());
        let sum = left.connect_sum(&entries[b].code, pos).unwrap();
        let v = jones(&sum).unwrap();
        let r = jones_reference(&sum).unwrap();
        ensure!(
            v == r,
            "{} # {}@{pos}: engine {v}, oracle {r}",
            entries[a].name,
            entries[b].name
        );
    }
    Ok(format!(
        "{} table entries, 50 random connect sums",
        entries.len()
    ))
}

fn multiplicativity() -> Outcome {
    let entries = all_entries();
    let mut checked = 0;
    for a in entries {
        for b in entries {
            if a.code.n() + b.code.n() > 12 {
                continue;
            }
            let report = verify_multiplicative(&[a.code.clone(), b.code.clone()]).unwrap();
            ensure!(
                report.passed(),
                "{} # {}: {}",
                a.name,
                b.name,
                report.summary()
            );
            ensure!(
                report.states_paired == 1 << (a.code.n() + b.code.n()),
                "{} # {}: {} states paired",
                a.name,
                b.name,
                report.states_paired
            );
            checked += 1;
        }
    }
    let factors: Vec<SignedGaussCode> = ["trefoil+", "figure8", "trefoil+"]
        .iter()
        .map(|n| lookup(n).unwrap().code.clone())
        .collect();
    let report = verify_multiplicative(&factors).unwrap();
    ensure!(report.passed(), "three-factor: {}", report.summary());
    ensure!(
        TripMatrix::build(&report.composite) == matrix(COMPOSITE),
        "three-factor composite has the wrong trip matrix"
    );
    Ok(format!(
        "{checked} ordered pairs; three factors: {}",
        report.summary()
    ))
}

fn additivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..1000 {
        let (na, nb) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let (a, b) = (
            random_symmetric(na, &mut rng),
            random_symmetric(nb, &mut rng),
        );
        let whole = TripMatrix::block_compose(&[a.clone(), b.clone()]);
        let state = State::new(rng.gen_range(0..1u64 << (na + nb)), na + nb);
        let parts = split_state(state, &BlockPartition::contiguous(&[na, nb])).unwrap();

        let toggled =
            |t: &TripMatrix, s: State| t.matrix().toggle_diagonal(s.toggle_mask()).unwrap();
        let (w, ta, tb) = (
            toggled(&whole, state),
            toggled(&a, parts[0]),
            toggled(&b, parts[1]),
        );
        ensure!(
            w.rank() == ta.rank() + tb.rank(),
            "case {case}: rank not additive"
        );
        ensure!(
            w.nullity() == ta.nullity() + tb.nullity(),
            "case {case}: nullity not additive"
        );
        ensure!(
            whole.matrix().nullity() == a.matrix().nullity() + b.matrix().nullity(),
            "case {case}: untoggled nullity not additive"
        );
        ensure!(
            whole.writhe() == a.writhe() + b.writhe(),
            "case {case}: writhe not additive"
        );
        ensure!(
            state.a_count() == parts[0].a_count() + parts[1].a_count()
                && state.b_count() == parts[0].b_count() + parts[1].b_count(),
            "case {case}: A/B counts not additive"
        );
    }
    Ok("1000 random block pairs".into())
}

fn delta_calculus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..1000 {
        let n = rng.gen_range(1..=8);
        let code = random_code(n, &mut rng);
        let t = TripMatrix::build(&code);
        let v = jones(&code).unwrap();

        let p = random_perm(n, &mut rng);
        let relabeled = code.relabel(&p).unwrap();
        let moved = t.apply_permutation(&p).unwrap();
        ensure!(
            TripMatrix::build(&relabeled) == moved,
            "case {case}: build/relabel do not commute"
        );
        let mut chain = t.clone();
        for (i, j) in p.transpositions() {
            chain = chain.delta_swap(i, j).unwrap();
        }
        ensure!(chain == moved, "case {case}: canonical swap chain differs");

        // An arbitrary swap sequence depends only on its product.
        let mut product = CrossingPermutation::identity(n);
        let mut walked = t.clone();
        for _ in 0..rng.gen_range(0..12) {
            let (i, j) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
            walked = walked.delta_swap(i, j).unwrap();
            product = CrossingPermutation::transposition(n, i, j)
                .unwrap()
                .compose(&product);
        }
        ensure!(
            walked == t.apply_permutation(&product).unwrap(),
            "case {case}: swap sequence differs from its product"
        );

        ensure!(
            jones(&relabeled).unwrap() == v,
            "case {case}: relabeling changed V"
        );
        let cal = Calibration::PINNED;
        ensure!(
            jones_from_trip(&walked, cal).unwrap() == v,
            "case {case}: swaps changed V"
        );
    }
    Ok("1000 random (code, permutation) pairs".into())
}

fn performance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let code = random_code(20, &mut rng);
    let t = TripMatrix::build(&code);
    let start = Instant::now();
    let single = state_sum_with(&t, SumOptions::default()).unwrap();
    let elapsed = start.elapsed();
    ensure!(
        elapsed < Duration::from_secs(60),
        "single-threaded sum took {elapsed:?}"
    );
    for threads in [2, 4, 7] {
        for order in [EnumerationOrder::Gray, EnumerationOrder::Lexicographic] {
            let multi = state_sum_with(&t, SumOptions { order, threads }).unwrap();
            ensure!(
                multi == single,
                "{threads} threads, {order:?}: result differs"
            );
        }
    }
    Ok(format!(
        "2^20 states in {:.2}s single-threaded; 2, 4, 7 workers identical",
        elapsed.as_secs_f64()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("figure-eight trip matrix", figure_eight_matrix),
        ("relabeling by delta(1,3)", relabeling),
        ("composite block structure", composite_blocks),
        ("calibration anchor", calibration_anchor),
        ("figure-eight Jones polynomial", figure_eight_jones),
        ("engine agrees with bracket oracle", oracle_equivalence),
        ("multiplicativity under connect sum", multiplicativity),
        ("rank, writhe and state-count additivity", additivity),
        ("relabeling calculus", delta_calculus),
        ("state sum performance", performance),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (idx, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {:>2}: {name} ({detail}) [{secs:.2}s]",
                idx + 1
            ),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {:>2}: {name}: {why} [{secs:.2}s]", idx + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
