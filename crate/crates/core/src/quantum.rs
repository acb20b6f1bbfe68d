//! Exact distributions of the measurement-based strategy on a graph state,
//! computed two independent ways: an affine GF(2) constraint system, and a
//! dense state-vector oracle. Plus the strong non-signalling checker.
//!
//! The affine path never touches floating point: every probability is a
//! dyadic rational `2^-k`.

use crate::bits::VertexSet;
use crate::game::{self, Answer, Question};
use crate::graph::Graph;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantumError {
    #[error("dense state vector supports at most {max} qubits, got {n}")]
    InstanceTooLarge { n: usize, max: usize },
}

/// Qubit cap for anything that materializes `2^n` amplitudes.
pub const MAX_DENSE_QUBITS: usize = 20;

/// A probability of the form `2^-log2_denom`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub log2_denom: u32,
}

impl Dyadic {
    pub fn as_f64(self) -> f64 {
        (self.log2_denom as f64 * -1.0).exp2()
    }
}

/// The exact output distribution of the quantum strategy on one question,
/// represented as a consistent affine subspace over GF(2): one parity row
/// `(support, rhs)` per vertex set `D` that binds on the question, with
/// `rhs = |E(D)| mod 2`.
///
/// Every answer satisfying the rows has probability `2^(rank - n)`; every
/// other answer has probability zero.
#[derive(Clone, Debug)]
pub struct QuantumDistribution {
    n: usize,
    x: Question,
    rows: Vec<(VertexSet, bool)>,
    reduced: Vec<(u64, bool)>,
    rank: usize,
    particular: u64,
    basis: Vec<u64>,
}

impl QuantumDistribution {
    /// Builds the constraint system for question `x` on `g`.
    ///
    /// Panics if GF(2) elimination meets an inconsistent row; the rows come
    /// from a group-consistent sign function, so that would be a bug.
    pub fn compute(g: &Graph, x: Question) -> QuantumDistribution {
        let n = g.n();
        let ones = x.ones();
        debug_assert!(ones.is_subset_of(g.vertices()));

        let mut rows: Vec<(VertexSet, bool)> = Vec::new();
        for d in g.eulerian_subsets(ones) {
            if d.is_empty() {
                continue;
            }
            let odd = g.odd_neighbourhood(d);
            if !odd.is_disjoint(ones) {
                continue;
            }
            rows.push((d | odd, g.induced_edge_count(d) % 2 == 1));
        }

        // reduced row echelon form over the n answer variables
        let mut reduced: Vec<(u64, bool)> = rows.iter().map(|&(s, r)| (s.bits(), r)).collect();
        let mut rank = 0usize;
        for col in 0..n {
            let bit = 1u64 << col;
            let Some(pivot) = (rank..reduced.len()).find(|&i| reduced[i].0 & bit != 0) else {
                continue;
            };
            reduced.swap(rank, pivot);
            let (prow, prhs) = reduced[rank];
            for (i, row) in reduced.iter_mut().enumerate() {
                if i != rank && row.0 & bit != 0 {
                    row.0 ^= prow;
                    row.1 ^= prhs;
                }
            }
            rank += 1;
        }
        assert!(
            reduced[rank..].iter().all(|&(s, r)| s == 0 && !r),
            "inconsistent stabilizer constraint system"
        );
        reduced.truncate(rank);

        // pivot of each reduced row is its lowest set bit (unique per row)
        let mut particular = 0u64;
        let mut pivots = 0u64;
        for &(s, r) in &reduced {
            let p = s & s.wrapping_neg();
            pivots |= p;
            if r {
                particular |= p;
            }
        }
        let free = VertexSet::full(n).bits() & !pivots;
        let mut basis = Vec::with_capacity(free.count_ones() as usize);
        for f in VertexSet::from_bits(free) {
            let fbit = 1u64 << f;
            let mut vec = fbit;
            for &(s, _) in &reduced {
                if s & fbit != 0 {
                    vec |= s & s.wrapping_neg();
                }
            }
            basis.push(vec);
        }

        QuantumDistribution {
            n,
            x,
            rows,
            reduced,
            rank,
            particular,
            basis,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn question(&self) -> Question {
        self.x
    }

    /// The raw parity rows, one per binding vertex set, ascending in `D`.
    pub fn rows(&self) -> &[(VertexSet, bool)] {
        &self.rows
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `k` such that every supported answer has probability `2^-k`.
    #[inline]
    pub fn log2_denominator(&self) -> u32 {
        (self.n - self.rank) as u32
    }

    #[inline]
    pub fn support_size(&self) -> u64 {
        1u64 << (self.n - self.rank)
    }

    pub fn probability(&self, a: Answer) -> Option<Dyadic> {
        let satisfied = self
            .reduced
            .iter()
            .all(|&(s, r)| ((a.0 & s).count_ones() & 1 == 1) == r);
        satisfied.then_some(Dyadic {
            log2_denom: self.log2_denominator(),
        })
    }

    /// Probability scaled by `2^n`: `2^rank` on the support, else 0.
    pub fn prob_scaled(&self, a: Answer) -> u64 {
        if self.probability(a).is_some() {
            1u64 << self.rank
        } else {
            0
        }
    }

    /// All answers of nonzero probability, enumerated by free-bit counter.
    pub fn support(&self) -> impl Iterator<Item = Answer> + '_ {
        let f = self.basis.len();
        (0u64..1 << f).map(move |idx| {
            let mut a = self.particular;
            let mut rest = idx;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                a ^= self.basis[j];
                rest &= rest - 1;
            }
            Answer(a)
        })
    }
}

/// Real amplitudes of the graph state `|G>`: the uniform superposition with
/// a sign `(-1)^(edges inside b)` on each basis state `b`.
pub fn graph_state_vector(g: &Graph) -> Result<Vec<f64>, QuantumError> {
    let n = g.n();
    if n > MAX_DENSE_QUBITS {
        return Err(QuantumError::InstanceTooLarge {
            n,
            max: MAX_DENSE_QUBITS,
        });
    }
    let norm = 0.5f64.powi(n as i32 / 2) * if n % 2 == 1 { 0.5f64.sqrt() } else { 1.0 };
    let state = (0..1u64 << n)
        .map(|b| {
            let inside = VertexSet::from_bits(b);
            if g.induced_edge_count(inside) % 2 == 1 {
                -norm
            } else {
                norm
            }
        })
        .collect();
    Ok(state)
}

/// Applies the Pauli word `X(x_mask) Z(z_mask)` to a real state vector
/// (Z first, then X). Only valid when the two masks are disjoint, which is
/// all the sign-rule check needs.
pub fn apply_pauli_xz(state: &[f64], x_mask: VertexSet, z_mask: VertexSet) -> Vec<f64> {
    assert!(x_mask.is_disjoint(z_mask), "overlapping X and Z masks");
    let mut out = vec![0.0; state.len()];
    for (b, &amp) in state.iter().enumerate() {
        let sign = if (b as u64 & z_mask.bits()).count_ones() & 1 == 1 {
            -1.0
        } else {
            1.0
        };
        out[b ^ x_mask.bits() as usize] = sign * amp;
    }
    out
}

/// Born probabilities of the measurement strategy on question `x`: players
/// with input 1 measure in the diagonal basis, players with input 0 in the
/// standard basis. Outcome bit 0 corresponds to the `(I + basis)/2`
/// projector, so a diagonal-basis measurement is a Hadamard followed by a
/// standard readout.
///
/// Index `a` of the result is the packed answer; entries sum to 1 within
/// floating-point error.
pub fn statevector_distribution(g: &Graph, x: Question) -> Result<Vec<f64>, QuantumError> {
    let mut state = graph_state_vector(g)?;
    let n = g.n();
    for qubit in x.ones() {
        hadamard_in_place(&mut state, qubit, n);
    }
    Ok(state.into_iter().map(|amp| amp * amp).collect())
}

fn hadamard_in_place(state: &mut [f64], qubit: usize, n: usize) {
    let sqrt_half = 0.5f64.sqrt();
    let bit = 1usize << qubit;
    for b in 0..1usize << n {
        if b & bit == 0 {
            let lo = state[b];
            let hi = state[b | bit];
            state[b] = (lo + hi) * sqrt_half;
            state[b | bit] = (lo - hi) * sqrt_half;
        }
    }
}

/// Checks that on every question, every answer in the support of the
/// quantum distribution avoids every binding losing constraint.
pub fn never_loses(g: &Graph) -> bool {
    let n = g.n();
    assert!(n <= MAX_DENSE_QUBITS, "support sweep capped at {MAX_DENSE_QUBITS} players");
    let constraints = game::losing_set(g);
    for xv in 0..1u64 << n {
        let x = Question(xv);
        let binding: Vec<&game::LosingConstraint> = constraints
            .iter()
            .filter(|c| game::applicable(c, x))
            .collect();
        let dist = QuantumDistribution::compute(g, x);
        // the binding constraints and the distribution rows come from the
        // same family of vertex sets
        debug_assert_eq!(binding.len(), dist.rows().len());
        for a in dist.support() {
            if binding.iter().any(|c| game::violates(c, a)) {
                return false;
            }
        }
    }
    true
}

/// A family of conditional distributions `P(a|x)` with exactly
/// representable probabilities, scaled by `2^players`.
pub trait DistributionFamily {
    fn players(&self) -> usize;
    /// `P(a|x) * 2^players`, exact.
    fn prob_scaled(&self, x: Question, a: Answer) -> u128;
}

/// The quantum-strategy family for a graph, all questions precomputed.
pub struct GraphStateFamily {
    n: usize,
    dists: Vec<QuantumDistribution>,
}

impl GraphStateFamily {
    pub fn new(g: &Graph) -> GraphStateFamily {
        let n = g.n();
        assert!(n <= MAX_DENSE_QUBITS, "family precomputation capped at {MAX_DENSE_QUBITS} players");
        GraphStateFamily {
            n,
            dists: (0..1u64 << n)
                .map(|x| QuantumDistribution::compute(g, Question(x)))
                .collect(),
        }
    }

    pub fn distribution(&self, x: Question) -> &QuantumDistribution {
        &self.dists[x.0 as usize]
    }
}

impl DistributionFamily for GraphStateFamily {
    fn players(&self) -> usize {
        self.n
    }

    fn prob_scaled(&self, x: Question, a: Answer) -> u128 {
        self.dists[x.0 as usize].prob_scaled(a) as u128
    }
}

/// Certificate for a strong non-signalling violation: player `player` can
/// signal because the two marginal sums differ once everyone else's inputs
/// and outputs are fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignallingViolation {
    pub player: usize,
    pub x_zero: Question,
    pub x_one: Question,
    /// The other players' fixed answers (bit `player` is zero).
    pub fixed_answers: Answer,
    pub sum_zero: u128,
    pub sum_one: u128,
}

impl std::fmt::Display for SignallingViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "player {} signals: sum_a P(a, rest={:b} | x={:b}) = {} but = {} with input flipped (x={:b})",
            self.player, self.fixed_answers.0, self.x_zero.0, self.sum_zero, self.sum_one, self.x_one.0
        )
    }
}

/// Verbatim check of the strong non-signalling condition: for every player
/// `i`, every pair of questions differing only at `i`, and every assignment
/// of the other players' answers, the sum over player `i`'s answer must
/// match. Returns the first violation in (player, question, answers) order.
pub fn check_non_signalling<F: DistributionFamily>(family: &F) -> Result<(), SignallingViolation> {
    let n = family.players();
    for i in 0..n {
        let bit = 1u64 << i;
        for xv in 0..1u64 << n {
            if xv & bit != 0 {
                continue;
            }
            let x0 = Question(xv);
            let x1 = Question(xv | bit);
            for av in 0..1u64 << n {
                if av & bit != 0 {
                    continue;
                }
                let sum = |x: Question| {
                    family.prob_scaled(x, Answer(av)) + family.prob_scaled(x, Answer(av | bit))
                };
                let sum_zero = sum(x0);
                let sum_one = sum(x1);
                if sum_zero != sum_one {
                    return Err(SignallingViolation {
                        player: i,
                        x_zero: x0,
                        x_one: x1,
                        fixed_answers: Answer(av),
                        sum_zero,
                        sum_one,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Dump of the full family in the diff format: one line `x-bits a-bits
/// log2denominator` per supported answer, bit strings with player 0
/// leftmost, lines sorted lexicographically.
pub fn distribution_dump(g: &Graph) -> String {
    let n = g.n();
    assert!(n <= MAX_DENSE_QUBITS, "dump capped at {MAX_DENSE_QUBITS} players");
    let bit_string = |bits: u64| -> String {
        (0..n)
            .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    };
    let mut lines = Vec::new();
    for xv in 0..1u64 << n {
        let dist = QuantumDistribution::compute(g, Question(xv));
        let k = dist.log2_denominator();
        for a in dist.support() {
            lines.push(format!("{} {} {}", bit_string(xv), bit_string(a.0), k));
        }
    }
    lines.sort_unstable();
    let mut out = lines.join("\n");
    out.push('\n');
    out
}
