//! The graph game: losing constraints, loss checking, exhaustive
//! classical-strategy optimization, and the parity-game correspondence for
//! complete graphs.

use crate::bits::{subsets_of, VertexSet};
use crate::graph::Graph;
use num_rational::Ratio;
use thiserror::Error;

/// Question bits, one per player: bit `i` is the input of player `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Question(pub u64);

impl Question {
    #[inline]
    pub fn ones(self) -> VertexSet {
        VertexSet::from_bits(self.0)
    }

    #[inline]
    pub fn zeros(self, n: usize) -> VertexSet {
        self.ones().complement_within(n)
    }

    #[inline]
    pub fn weight(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn bit(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }
}

/// Answer bits, one per player: bit `i` is the output of player `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Answer(pub u64);

impl Answer {
    #[inline]
    pub fn bit(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    /// Parity of the answer restricted to `support`.
    #[inline]
    pub fn parity_on(self, support: VertexSet) -> bool {
        (self.0 & support.bits()).count_ones() & 1 == 1
    }
}

/// One losing condition of the graph game, derived from a nonempty vertex
/// set `D` whose induced subgraph has all even degrees: on any question
/// asking `1` across `D` and `0` across `Odd(D)`, the answers over
/// `D ∪ Odd(D)` must sum to `|E(D)| mod 2` or the players lose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LosingConstraint {
    pub d: VertexSet,
    pub odd: VertexSet,
    pub support: VertexSet,
    /// `|E(D)| mod 2`; answers summing to the opposite parity lose.
    pub win_parity: bool,
}

/// All losing constraints of the game on `g`, one per nonempty vertex set
/// with an all-even-degrees induced subgraph, ascending in `d`.
///
/// The empty set is excluded: its condition `0 = 1` can never fire, so the
/// constraint would be vacuous.
pub fn losing_set(g: &Graph) -> Vec<LosingConstraint> {
    g.eulerian_subsets(g.vertices())
        .filter(|d| !d.is_empty())
        .map(|d| {
            let odd = g.odd_neighbourhood(d);
            debug_assert!(d.is_disjoint(odd));
            LosingConstraint {
                d,
                odd,
                support: d | odd,
                win_parity: g.induced_edge_count(d) % 2 == 1,
            }
        })
        .collect()
}

/// Does the constraint bind on question `x`? True iff `x` is `1` across
/// `c.d` and `0` across `c.odd`; the remaining players' inputs are free.
#[inline]
pub fn applicable(c: &LosingConstraint, x: Question) -> bool {
    c.d.is_subset_of(x.ones()) && c.odd.is_disjoint(x.ones())
}

/// Does answer `a` violate the constraint's parity condition?
#[inline]
pub fn violates(c: &LosingConstraint, a: Answer) -> bool {
    a.parity_on(c.support) != c.win_parity
}

/// First constraint in `constraints` order that binds on `x` and is
/// violated by `a`, or `None` when the pair wins.
pub fn loses_in<'a>(
    constraints: &'a [LosingConstraint],
    x: Question,
    a: Answer,
) -> Option<&'a LosingConstraint> {
    constraints
        .iter()
        .find(|c| applicable(c, x) && violates(c, a))
}

/// Convenience form of [`loses_in`] that builds the losing set on the fly.
pub fn loses(g: &Graph, x: Question, a: Answer) -> Option<LosingConstraint> {
    loses_in(&losing_set(g), x, a).copied()
}

/// A deterministic strategy: per player, the answer on input 0 and on
/// input 1, stored as two bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyTable {
    n: usize,
    on_zero: u64,
    on_one: u64,
}

impl StrategyTable {
    pub fn new(n: usize, on_zero: u64, on_one: u64) -> StrategyTable {
        assert!(n <= VertexSet::MAX_VERTICES);
        let mask = VertexSet::full(n).bits();
        StrategyTable {
            n,
            on_zero: on_zero & mask,
            on_one: on_one & mask,
        }
    }

    pub fn all_zero(n: usize) -> StrategyTable {
        StrategyTable::new(n, 0, 0)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn on_zero(&self) -> u64 {
        self.on_zero
    }

    #[inline]
    pub fn on_one(&self) -> u64 {
        self.on_one
    }

    /// The answer the table produces on question `x`.
    #[inline]
    pub fn answer(&self, x: Question) -> Answer {
        Answer((self.on_zero & !x.0) | (self.on_one & x.0))
    }

    /// Per-player `(answer on 0, answer on 1)` pairs.
    pub fn pairs(&self) -> Vec<(bool, bool)> {
        (0..self.n)
            .map(|v| (self.on_zero >> v & 1 == 1, self.on_one >> v & 1 == 1))
            .collect()
    }

    /// Integer encoding used for tie-breaking: player `v` contributes the
    /// base-4 digit `a_v^0 + 2*a_v^1` at position `v`.
    pub fn encode(&self) -> u128 {
        interleave_bits(self.on_zero, self.on_one)
    }
}

/// Spreads `low` over the even bit positions and `high` over the odd ones.
fn interleave_bits(low: u64, high: u64) -> u128 {
    fn spread(x: u64) -> u128 {
        let mut x = x as u128;
        x = (x | x << 32) & 0x0000_0000_ffff_ffff_0000_0000_ffff_ffff;
        x = (x | x << 16) & 0x0000_ffff_0000_ffff_0000_ffff_0000_ffff;
        x = (x | x << 8) & 0x00ff_00ff_00ff_00ff_00ff_00ff_00ff_00ff;
        x = (x | x << 4) & 0x0f0f_0f0f_0f0f_0f0f_0f0f_0f0f_0f0f_0f0f;
        x = (x | x << 2) & 0x3333_3333_3333_3333_3333_3333_3333_3333;
        x = (x | x << 1) & 0x5555_5555_5555_5555_5555_5555_5555_5555;
        x
    }
    spread(low) | spread(high) << 1
}

/// Question distribution the win probability is measured against.
///
/// The game is promise-free, so `Uniform` weighs all `2^n` questions
/// equally. `PromiseRestricted` weighs only the questions on which at least
/// one constraint binds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuestionDistribution {
    Uniform,
    PromiseRestricted,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("exhaustive strategy search supports at most {max} players, got {n}")]
    InstanceTooLarge { n: usize, max: usize },
}

/// Upper bound on the exhaustive `4^n x 2^n` strategy sweep.
pub const MAX_EXHAUSTIVE_PLAYERS: usize = 13;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalOptimum {
    /// Exact optimum as a reduced fraction `wins/total`.
    pub win_probability: Ratio<u64>,
    pub wins: u64,
    pub total: u64,
    /// An optimal table; ties broken by the smallest [`StrategyTable::encode`].
    pub best: StrategyTable,
}

/// Bitmask over the `2^n` questions, one bit per question word-packed.
struct QuestionMask {
    words: Vec<u64>,
}

impl QuestionMask {
    fn zeros(question_count: u64) -> QuestionMask {
        QuestionMask {
            words: vec![0; (question_count as usize).div_ceil(64)],
        }
    }

    #[inline]
    fn set(&mut self, x: u64) {
        self.words[(x >> 6) as usize] |= 1 << (x & 63);
    }

    fn or_assign(&mut self, other: &QuestionMask) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    fn count_and(&self, other: &QuestionMask) -> u64 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    }

    fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }
}

/// Exact optimum win probability over all deterministic strategies, by
/// exhaustive search, together with one optimal table.
///
/// A deterministic strategy violates a constraint independently of which
/// binding question is asked (the constraint fixes the inputs across its
/// support), so each strategy is scored by OR-ing the per-constraint
/// question masks of its violated constraints.
///
/// Shared randomness cannot beat the deterministic optimum of this linear
/// objective, so the value returned is also the optimum for probabilistic
/// strategies.
pub fn classical_optimum(
    g: &Graph,
    dist: QuestionDistribution,
) -> Result<ClassicalOptimum, GameError> {
    let n = g.n();
    if n > MAX_EXHAUSTIVE_PLAYERS {
        return Err(GameError::InstanceTooLarge {
            n,
            max: MAX_EXHAUSTIVE_PLAYERS,
        });
    }
    let constraints = losing_set(g);
    let question_count = 1u64 << n;

    // Q(D) per constraint: inputs fixed on the support, free elsewhere.
    let masks: Vec<QuestionMask> = constraints
        .iter()
        .map(|c| {
            let mut m = QuestionMask::zeros(question_count);
            for free in subsets_of(c.support.complement_within(n)) {
                m.set(c.d.bits() | free.bits());
            }
            m
        })
        .collect();

    let domain = match dist {
        QuestionDistribution::Uniform => {
            let mut m = QuestionMask::zeros(question_count);
            for x in 0..question_count {
                m.set(x);
            }
            m
        }
        QuestionDistribution::PromiseRestricted => {
            let mut m = QuestionMask::zeros(question_count);
            for cm in &masks {
                m.or_assign(cm);
            }
            m
        }
    };
    let total = domain.count();
    assert!(total > 0, "question domain is empty");

    let mut best_wins = 0u64;
    let mut best_encoding = u128::MAX;
    let mut best = (0u64, 0u64);
    let mut losing = QuestionMask::zeros(question_count);

    'outer: for on_zero in 0..question_count {
        for on_one in 0..question_count {
            losing.clear();
            for (c, m) in constraints.iter().zip(&masks) {
                let parity = ((on_one & c.d.bits()).count_ones()
                    + (on_zero & c.odd.bits()).count_ones())
                    & 1
                    == 1;
                if parity != c.win_parity {
                    losing.or_assign(m);
                }
            }
            let wins = total - losing.count_and(&domain);
            if wins >= best_wins {
                let encoding = interleave_bits(on_zero, on_one);
                if wins > best_wins || encoding < best_encoding {
                    best_wins = wins;
                    best_encoding = encoding;
                    best = (on_zero, on_one);
                }
            }
            // the all-zero table is scanned first; if it is perfect nothing
            // can beat (total wins, encoding 0)
            if best_wins == total && best_encoding == 0 {
                break 'outer;
            }
        }
    }

    Ok(ClassicalOptimum {
        win_probability: Ratio::new(best_wins, total),
        wins: best_wins,
        total,
        best: StrategyTable::new(n, best.0, best.1),
    })
}

/// The parity game on `n >= 3` players: one entry per even-weight question,
/// carrying the winning parity `(sum x_i)/2 mod 2` that the answers of all
/// `n` players must reach. Odd-weight questions are outside the promise.
pub fn mermin_losing_set(n: usize) -> Vec<(Question, bool)> {
    assert!((3..=VertexSet::MAX_VERTICES).contains(&n));
    let mut out = Vec::new();
    for x in 0u64..1 << n {
        let w = x.count_ones() as u64;
        if w % 2 == 0 {
            out.push((Question(x), (w / 2) % 2 == 1));
        }
    }
    out
}

/// Exhaustively verifies, in both directions, that flipping player 0's
/// input maps the constrained (odd-weight) questions of the complete-graph
/// game bijectively onto the even-weight promise set of the parity game,
/// with winning parities corresponding under the answer relation
/// `a0_graph + a0_parity = x0_graph + 1` (all other answers equal).
///
/// The answer shift is driven by the *graph-game-side* input; the opposite
/// convention fails already at `n = 3`.
pub fn mermin_transform_check(n: usize) -> bool {
    assert!((3..=6).contains(&n), "exhaustive check supports n in 3..=6");
    let constraints = losing_set(&Graph::complete(n));
    let parity_of: std::collections::HashMap<u64, bool> = mermin_losing_set(n)
        .into_iter()
        .map(|(q, p)| (q.0, p))
        .collect();

    let graph_wins = |x: Question, a: Answer| loses_in(&constraints, x, a).is_none();
    let parity_wins = |x: u64, a: u64| {
        let p = parity_of.get(&x).expect("question inside the promise");
        (a.count_ones() & 1 == 1) == *p
    };

    for x in 0u64..1 << n {
        let weight_odd = x.count_ones() % 2 == 1;
        let flipped = x ^ 1;
        if weight_odd {
            // graph side -> parity side
            if !parity_of.contains_key(&flipped) {
                return false;
            }
            let shift = u64::from(x & 1 == 0); // x0_graph + 1 mod 2
            for a in 0u64..1 << n {
                if graph_wins(Question(x), Answer(a)) != parity_wins(flipped, a ^ shift) {
                    return false;
                }
            }
        } else {
            // parity side -> graph side; the shift still uses the
            // graph-side input, here flipped = x ^ 1
            if parity_of.get(&x).is_none() {
                return false;
            }
            let shift = u64::from(flipped & 1 == 0);
            for a in 0u64..1 << n {
                if parity_wins(x, a) != graph_wins(Question(flipped), Answer(a ^ shift)) {
                    return false;
                }
            }
        }
    }
    true
}
