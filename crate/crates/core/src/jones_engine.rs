//! Jones polynomial from a trip matrix.
//!
//! For a trip matrix `T` on `n` crossings,
//!
//! ```text
//! V = (-q^3)^(ε·w(T)) · Σ_S q^(B(S) - A(S)) · d^nul(T_S),   d = -q^-2 - q^2
//! ```
//!
//! where `S` ranges over the `2^n` states, `T_S` is `T` with the diagonal
//! flipped at the B-crossings of `S`, and `q = t^(1/4)`. The sign `ε` is fixed
//! by [`Calibration`].

use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::gauss_code::{GaussError, SignedGaussCode};
use crate::gf2_matrix::{rank_packed, Gf2Matrix, ToggleMask};
use crate::laurent_poly::{LaurentPoly, PolyError};
use crate::trip_matrix::{BlockPartition, TripMatrix};

/// Largest crossing count the state sum accepts (`2^24` states).
pub const MAX_CROSSINGS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("{n} crossings exceeds the supported maximum of {max}")]
    TooLarge { n: usize, max: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("partition covers {partition} crossings but the state has {state}")]
    PartitionMismatch { partition: usize, state: usize },
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error("calibration failed: {0}")]
    Calibration(String),
}

/// Assignment of A or B to every crossing; bit `k` set means crossing `k + 1`
/// is smoothed B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct State {
    mask: u64,
    n: usize,
}

impl State {
    pub fn new(mask: u64, n: usize) -> Self {
        assert!(n <= 64, "states are limited to 64 crossings");
        assert!(n == 64 || mask >> n == 0, "mask {mask:#b} wider than {n}");
        Self { mask, n }
    }

    pub fn all_a(n: usize) -> Self {
        Self::new(0, n)
    }

    pub fn mask(self) -> u64 {
        self.mask
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn b_count(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn a_count(self) -> usize {
        self.n - self.b_count()
    }

    /// Whether crossing `id` (1-based) is smoothed B.
    pub fn is_b(self, id: usize) -> bool {
        self.mask >> (id - 1) & 1 == 1
    }

    pub fn toggle_mask(self) -> ToggleMask {
        ToggleMask::from_bits(self.mask)
    }
}

/// Sign `ε` in the writhe prefactor `(-q^3)^(ε·w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Calibration {
    writhe_exponent_sign: i32,
}

impl Calibration {
    /// The value [`Calibration::derive`] produces; pairs with "positive
    /// crossing ↦ diagonal 1".
    pub const PINNED: Calibration = Calibration {
        writhe_exponent_sign: -1,
    };

    /// Both possible signs, `+1` first.
    pub fn candidates() -> [Calibration; 2] {
        [1, -1].map(|writhe_exponent_sign| Calibration {
            writhe_exponent_sign,
        })
    }

    pub fn writhe_exponent_sign(self) -> i32 {
        self.writhe_exponent_sign
    }

    /// The all-positive trefoil anchor: `-t^-4 + t^-3 + t^-1`.
    pub fn anchor_value() -> LaurentPoly {
        LaurentPoly::from_terms([(-16, -1), (-12, 1), (-4, 1)]).expect("small coefficients")
    }

    /// Tries both signs on the all-ones 3x3 matrix (the all-positive
    /// trefoil). Exactly one must give integral powers of `t`, and that one
    /// must equal [`Calibration::anchor_value`].
    pub fn derive() -> Result<Calibration, EngineError> {
        let trefoil = TripMatrix::from_matrix(Gf2Matrix::from_fn(3, |_, _| true))
            .expect("all-ones matrix is symmetric");
        let mut integral = Vec::new();
        for cal in Self::candidates() {
            let v = jones_from_trip(&trefoil, cal)?;
            if v.is_integral_in_t() {
                integral.push((cal, v));
            }
        }
        match integral.as_slice() {
            [(cal, v)] if *v == Self::anchor_value() => Ok(*cal),
            [(_, v)] => Err(EngineError::Calibration(format!(
                "integral trefoil polynomial {v} differs from the anchor"
            ))),
            _ => Err(EngineError::Calibration(format!(
                "{} writhe signs give integral powers",
                integral.len()
            ))),
        }
    }
}

impl Default for Calibration {
    fn default() -> Self {
        Self::PINNED
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnumerationOrder {
    /// Successive states differ in one crossing.
    #[default]
    Gray,
    Lexicographic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumOptions {
    pub order: EnumerationOrder,
    pub threads: usize,
}

impl Default for SumOptions {
    fn default() -> Self {
        Self {
            order: EnumerationOrder::Gray,
            threads: 1,
        }
    }
}

fn check_size(n: usize) -> Result<(), EngineError> {
    if n > MAX_CROSSINGS {
        return Err(EngineError::TooLarge {
            n,
            max: MAX_CROSSINGS,
        });
    }
    Ok(())
}

/// One summand: `q^(B - A) · d^nul(T_S)`.
pub fn state_term(t: &TripMatrix, state: State) -> Result<LaurentPoly, EngineError> {
    let toggled = t
        .matrix()
        .toggle_diagonal(state.toggle_mask())
        .expect("state width matches matrix");
    term(t.n(), state.b_count(), toggled.nullity())
}

fn term(n: usize, b: usize, nullity: usize) -> Result<LaurentPoly, EngineError> {
    let shift = 2 * b as i32 - n as i32;
    Ok(LaurentPoly::loop_factor()
        .pow(nullity as i32)?
        .shift(shift)?)
}

/// The bracket-style sum over all `2^n` states, single-threaded, Gray order.
pub fn state_sum(t: &TripMatrix) -> Result<LaurentPoly, EngineError> {
    state_sum_with(t, SumOptions::default())
}

pub fn state_sum_with(t: &TripMatrix, opts: SumOptions) -> Result<LaurentPoly, EngineError> {
    let n = t.n();
    check_size(n)?;
    let total = 1u64 << n;
    let threads = opts.threads.max(1).min(total as usize);
    let ranges: Vec<Range<u64>> = (0..threads as u64)
        .map(|k| (total * k / threads as u64)..(total * (k + 1) / threads as u64))
        .collect();
    if threads == 1 {
        return state_sum_range(t, 0..total, opts.order);
    }
    let partials: Vec<Result<LaurentPoly, EngineError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .cloned()
            .map(|r| scope.spawn(move || state_sum_range(t, r, opts.order)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("state sum worker panicked"))
            .collect()
    });
    let mut sum = LaurentPoly::zero();
    for p in partials {
        sum.add_assign(&p?)?;
    }
    Ok(sum)
}

/// Partial sum over the state indices in `range`. In Gray order index `i`
/// stands for the mask `i ^ (i >> 1)`; in lexicographic order for `i`
/// itself. Disjoint ranges covering `0..2^n` add up to the full sum.
pub fn state_sum_range(
    t: &TripMatrix,
    range: Range<u64>,
    order: EnumerationOrder,
) -> Result<LaurentPoly, EngineError> {
    let n = t.n();
    check_size(n)?;
    assert!(range.end <= 1u64 << n, "range exceeds state space");
    let rows = t.matrix().packed_rows().expect("n <= 24 fits one word");

    // histogram[b][nullity] = number of states with that B-count and nullity
    let mut histogram = vec![vec![0u64; n + 1]; n + 1];
    let mut scratch = [0u64; MAX_CROSSINGS];
    match order {
        EnumerationOrder::Lexicographic => {
            for mask in range {
                for (k, (dst, &src)) in scratch.iter_mut().zip(&rows).enumerate() {
                    *dst = src ^ ((mask >> k & 1) << k);
                }
                let nullity = n - rank_packed(&mut scratch[..n]);
                histogram[mask.count_ones() as usize][nullity] += 1;
            }
        }
        EnumerationOrder::Gray => {
            if !range.is_empty() {
                let mut mask = range.start ^ (range.start >> 1);
                let mut current = rows.clone();
                for (k, row) in current.iter_mut().enumerate() {
                    *row ^= (mask >> k & 1) << k;
                }
                let mut index = range.start;
                loop {
                    scratch[..n].copy_from_slice(&current);
                    let nullity = n - rank_packed(&mut scratch[..n]);
                    histogram[mask.count_ones() as usize][nullity] += 1;
                    index += 1;
                    if index == range.end {
                        break;
                    }
                    let k = index.trailing_zeros() as usize;
                    mask ^= 1 << k;
                    current[k] ^= 1 << k;
                }
            }
        }
    }

    let mut sum = LaurentPoly::zero();
    for (b, row) in histogram.iter().enumerate() {
        for (nullity, &count) in row.iter().enumerate() {
            if count > 0 {
                let count = i64::try_from(count).map_err(|_| PolyError::Overflow)?;
                sum.add_assign(&term(n, b, nullity)?.scale(count)?)?;
            }
        }
    }
    Ok(sum)
}

fn prefactor(writhe: i32, cal: Calibration) -> Result<LaurentPoly, EngineError> {
    Ok(LaurentPoly::monomial(-1, 3).pow(cal.writhe_exponent_sign * writhe)?)
}

pub fn jones_from_trip(t: &TripMatrix, cal: Calibration) -> Result<LaurentPoly, EngineError> {
    jones_from_trip_with(t, cal, SumOptions::default())
}

pub fn jones_from_trip_with(
    t: &TripMatrix,
    cal: Calibration,
    opts: SumOptions,
) -> Result<LaurentPoly, EngineError> {
    let sum = state_sum_with(t, opts)?;
    Ok(prefactor(t.writhe(), cal)?.mul(&sum)?)
}

/// Jones polynomial of a code with the pinned calibration.
pub fn jones(code: &SignedGaussCode) -> Result<LaurentPoly, EngineError> {
    jones_from_trip(&TripMatrix::build(code), Calibration::PINNED)
}

pub fn jones_with(code: &SignedGaussCode, opts: SumOptions) -> Result<LaurentPoly, EngineError> {
    jones_from_trip_with(&TripMatrix::build(code), Calibration::PINNED, opts)
}

/// Restricts a state to each group of the partition; within a group, bit `k`
/// of the sub-state is the `k`-th listed crossing.
pub fn split_state(state: State, partition: &BlockPartition) -> Result<Vec<State>, EngineError> {
    if partition.n() != state.n() {
        return Err(EngineError::PartitionMismatch {
            partition: partition.n(),
            state: state.n(),
        });
    }
    Ok(partition
        .groups()
        .iter()
        .map(|group| {
            let mask = group
                .iter()
                .enumerate()
                .fold(0u64, |acc, (k, &id)| acc | (u64::from(state.is_b(id)) << k));
            State::new(mask, group.len())
        })
        .collect())
}

/// Outcome of checking `V(K1 # ... # Km) = V(K1) ··· V(Km)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub composite: SignedGaussCode,
    /// Splice position used at each successive connect sum.
    pub insert_positions: Vec<usize>,
    pub composite_jones: LaurentPoly,
    pub product_jones: LaurentPoly,
    pub equal: bool,
    /// The composite trip matrix equals the block sum of the component
    /// trip matrices.
    pub block_diagonal: bool,
    pub writhe_additive: bool,
    /// Composite states, each paired with its tuple of component sub-states.
    pub states_paired: u64,
    pub term_mismatches: u64,
    /// First composite state whose summand differs from the product of its
    /// sub-state summands.
    pub counterexample: Option<State>,
    /// The same check at a second splice position.
    pub second_insert_positions: Vec<usize>,
    pub equal_at_second_position: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.equal
            && self.block_diagonal
            && self.writhe_additive
            && self.term_mismatches == 0
            && self.equal_at_second_position
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!("equal; {} states paired", self.states_paired)
        } else {
            let mut reasons = Vec::new();
            if !self.equal {
                reasons.push("polynomials differ".to_string());
            }
            if !self.block_diagonal {
                reasons.push("trip matrix not block diagonal".to_string());
            }
            if !self.writhe_additive {
                reasons.push("writhe not additive".to_string());
            }
            if self.term_mismatches > 0 {
                reasons.push(format!(
                    "{} of {} state terms unpaired",
                    self.term_mismatches, self.states_paired
                ));
            }
            if !self.equal_at_second_position {
                reasons.push("second splice position differs".to_string());
            }
            format!("NOT equal; {}", reasons.join("; "))
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary())?;
        writeln!(f, "composite: {}", self.composite)?;
        writeln!(f, "insert positions: {:?}", self.insert_positions)?;
        writeln!(f, "V(composite): {}", self.composite_jones)?;
        writeln!(f, "product of V(components): {}", self.product_jones)?;
        writeln!(f, "block diagonal: {}", self.block_diagonal)?;
        writeln!(f, "writhe additive: {}", self.writhe_additive)?;
        writeln!(
            f,
            "second splice {:?}: {}",
            self.second_insert_positions,
            if self.equal_at_second_position {
                "equal"
            } else {
                "differs"
            }
        )?;
        match self.counterexample {
            Some(s) => write!(f, "counterexample state mask: {:#b}", s.mask()),
            None => write!(f, "counterexample: none"),
        }
    }
}

/// Splices the components left to right, each one inserted into the running
/// composite at `position(len)` where `len` is the composite's word length.
fn splice(
    components: &[SignedGaussCode],
    position: impl Fn(usize) -> usize,
) -> Result<(SignedGaussCode, Vec<usize>), EngineError> {
    let mut composite = SignedGaussCode::unknot();
    let mut positions = Vec::with_capacity(components.len());
    for c in components {
        let pos = position(composite.word().len());
        composite = composite.connect_sum(c, pos)?;
        positions.push(pos);
    }
    Ok((composite, positions))
}

/// Compares every composite summand with the product of its sub-state
/// summands. Returns the number of mismatches and the first offender.
fn pair_terms(
    t: &TripMatrix,
    blocks: &[TripMatrix],
    partition: &BlockPartition,
) -> Result<(u64, Option<State>), EngineError> {
    let n = t.n();
    let mut mismatches = 0;
    let mut first = None;
    for mask in 0..1u64 << n {
        let state = State::new(mask, n);
        let whole = state_term(t, state)?;
        let mut product = LaurentPoly::one();
        for (block, sub) in blocks.iter().zip(split_state(state, partition)?) {
            product = product.mul(&state_term(block, sub)?)?;
        }
        if whole != product {
            mismatches += 1;
            first.get_or_insert(state);
        }
    }
    Ok((mismatches, first))
}

/// Checks multiplicativity over the connect sum of `components`, including
/// the summand-by-summand pairing between composite states and tuples of
/// component states.
pub fn verify_multiplicative(
    components: &[SignedGaussCode],
) -> Result<VerificationReport, EngineError> {
    let (composite, insert_positions) = splice(components, |_| 0)?;
    let (second, second_insert_positions) = splice(components, |len| len / 2)?;
    let n = composite.n();
    check_size(n)?;

    let blocks: Vec<TripMatrix> = components.iter().map(TripMatrix::build).collect();
    let t = TripMatrix::build(&composite);
    let block_diagonal = t == TripMatrix::block_compose(&blocks);
    let writhe_additive = t.writhe() == blocks.iter().map(TripMatrix::writhe).sum::<i32>();

    let composite_jones = jones(&composite)?;
    let mut product_jones = LaurentPoly::one();
    for c in components {
        product_jones = product_jones.mul(&jones(c)?)?;
    }
    let equal = composite_jones == product_jones;
    let equal_at_second_position = jones(&second)? == product_jones;

    let sizes: Vec<usize> = components.iter().map(SignedGaussCode::n).collect();
    let partition = BlockPartition::contiguous(&sizes);
    let states_paired = 1u64 << n;
    let (term_mismatches, counterexample) = pair_terms(&t, &blocks, &partition)?;

    Ok(VerificationReport {
        composite,
        insert_positions,
        composite_jones,
        product_jones,
        equal,
        block_diagonal,
        writhe_additive,
        states_paired,
        term_mismatches,
        counterexample,
        second_insert_positions,
        equal_at_second_position,
    })
}
