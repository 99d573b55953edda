//! Exact solvers for upper-triangular generators with diagonal entries ±1.
//!
//! A product `M1⋯Mn` of such matrices is `(s, t·a; 0, t)` where `(s, t)` is
//! the diagonal sign pair and `a` the value of the corresponding run in a
//! four-state Z-VASS. Run-value sets are semilinear and computed exactly.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{exact_div, int, product, Mat2, UTMat, Vec2};
use crate::diophantine::{represent_in_monoid, solve_linear, LinearSystem, SemilinearSet};
use crate::error::{Error, Result};
use crate::instance::{disjunction, NoCertificate, ProblemInstance, Verdict, Word};

/// Diagonal sign pair `(s, t)`.
pub type SignPair = (i8, i8);

pub const SIGN_PAIRS: [SignPair; 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

pub fn pair_index((s, t): SignPair) -> usize {
    usize::from(s < 0) * 2 + usize::from(t < 0)
}

fn sign_of(v: &BigInt) -> Option<i8> {
    if v.is_one() {
        Some(1)
    } else if (-v).is_one() {
        Some(-1)
    } else {
        None
    }
}

/// Upper-triangular view of a generator with `|a| = |c| = 1`.
pub fn unit_diagonal(m: &Mat2) -> Result<UTMat> {
    let ut = m
        .to_ut()
        .ok_or_else(|| Error::Precondition(format!("generator {m:?} is not upper triangular")))?;
    if !ut.has_unit_diagonal() {
        return Err(Error::Precondition(format!("generator {m:?} has a diagonal entry other than ±1")));
    }
    Ok(ut)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZvassTransition {
    pub from: usize,
    pub weight: BigInt,
    pub to: usize,
    /// Generator this transition reads.
    pub generator: usize,
}

/// Four-state Z-VASS whose states are indexed by [`pair_index`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZVass {
    pub transitions: Vec<ZvassTransition>,
}

/// From `(s, t)` reading `(s' a'; 0 t')`: weight `s·t·t'·a'`, target `(s·s', t·t')`.
pub fn build_zvass(gens: &[UTMat]) -> Result<ZVass> {
    let mut transitions = Vec::with_capacity(4 * gens.len());
    for &(s, t) in &SIGN_PAIRS {
        for (i, g) in gens.iter().enumerate() {
            let (Some(s2), Some(t2)) = (sign_of(&g.a), sign_of(&g.c)) else {
                return Err(Error::Precondition(format!("generator {g:?} has a diagonal entry other than ±1")));
            };
            transitions.push(ZvassTransition {
                from: pair_index((s, t)),
                weight: &g.b * i64::from(s * t * t2),
                to: pair_index((s * s2, t * t2)),
                generator: i,
            });
        }
    }
    Ok(ZVass { transitions })
}

/// Closed walk through `start` used to pump run values.
#[derive(Clone, Debug)]
struct Cycle {
    start: usize,
    edges: Vec<usize>,
}

/// Run of bounded length that visits `visited` and ends at the target; any
/// run with the same visited set is this run plus cycles inside the set.
#[derive(Clone, Debug)]
struct Skeleton {
    edges: Vec<usize>,
}

/// Everything needed to answer value queries for one `(from, to)` pair.
#[derive(Clone, Debug)]
pub struct RunValues {
    from: usize,
    /// Per visited-state mask: skeleton weights and the cycle weights inside the mask.
    groups: Vec<Group>,
}

#[derive(Clone, Debug)]
struct Group {
    skeletons: Vec<(BigInt, Skeleton)>,
    cycles: Vec<(BigInt, Cycle)>,
}

impl ZVass {
    fn outgoing(&self, state: usize) -> impl Iterator<Item = (usize, &ZvassTransition)> {
        self.transitions.iter().enumerate().filter(move |(_, t)| t.from == state)
    }

    /// Value and end state of a run reading `word` from `from`.
    pub fn run_value(&self, from: usize, word: &[usize]) -> Option<(BigInt, usize)> {
        let mut state = from;
        let mut value = BigInt::zero();
        for &g in word {
            let t = self.outgoing(state).map(|(_, t)| t).find(|t| t.generator == g)?;
            value += &t.weight;
            state = t.to;
        }
        Some((value, state))
    }

    /// Skeleton runs: between first visits of new states no state repeats.
    fn skeletons(&self, from: usize, to: usize) -> HashMap<u8, Vec<(BigInt, Skeleton)>> {
        // key: (state, visited mask, segment mask); value: weight -> back pointer
        type Key = (usize, u8, u8);
        let start: Key = (from, 1 << from, 1 << from);
        let mut back: HashMap<(Key, BigInt), Option<(Key, BigInt, usize)>> = HashMap::new();
        back.insert((start, BigInt::zero()), None);
        let mut layer = vec![(start, BigInt::zero())];
        let mut finals: Vec<(Key, BigInt)> = Vec::new();
        if from == to {
            finals.push((start, BigInt::zero()));
        }
        while !layer.is_empty() {
            let mut next = Vec::new();
            for (key @ (state, visited, segment), w) in &layer {
                for (idx, t) in self.outgoing(*state) {
                    let bit = 1u8 << t.to;
                    let (v2, s2) = if visited & bit == 0 {
                        (visited | bit, bit)
                    } else if segment & bit != 0 {
                        continue;
                    } else {
                        (*visited, segment | bit)
                    };
                    let nk = (t.to, v2, s2);
                    let nw = w + &t.weight;
                    if back.contains_key(&(nk, nw.clone())) {
                        continue;
                    }
                    back.insert((nk, nw.clone()), Some((*key, w.clone(), idx)));
                    if t.to == to {
                        finals.push((nk, nw.clone()));
                    }
                    next.push((nk, nw));
                }
            }
            layer = next;
        }
        let mut out: HashMap<u8, HashMap<BigInt, Skeleton>> = HashMap::new();
        for (key, w) in finals {
            let mut edges = Vec::new();
            let mut cur = (key, w.clone());
            while let Some(Some((pk, pw, idx))) = back.get(&cur) {
                edges.push(*idx);
                cur = (*pk, pw.clone());
            }
            edges.reverse();
            out.entry(key.1).or_default().entry(w).or_insert(Skeleton { edges });
        }
        out.into_iter().map(|(m, ws)| (m, ws.into_iter().collect())).collect()
    }

    /// One representative simple cycle per (vertex mask, weight).
    fn simple_cycles(&self) -> HashMap<u8, HashMap<BigInt, Cycle>> {
        let mut out: HashMap<u8, HashMap<BigInt, Cycle>> = HashMap::new();
        for start in 0..4 {
            let mut stack: Vec<(usize, u8, BigInt, Vec<usize>)> = vec![(start, 1 << start, BigInt::zero(), Vec::new())];
            while let Some((state, mask, w, edges)) = stack.pop() {
                for (idx, t) in self.outgoing(state) {
                    let nw = &w + &t.weight;
                    let mut ne = edges.clone();
                    ne.push(idx);
                    if t.to == start {
                        out.entry(mask).or_default().entry(nw).or_insert(Cycle { start, edges: ne });
                    } else if mask & (1 << t.to) == 0 && t.to > start {
                        stack.push((t.to, mask | (1 << t.to), nw, ne));
                    }
                }
            }
        }
        out
    }

    pub fn run_values(&self, from: SignPair, to: SignPair) -> RunValues {
        let (from, to) = (pair_index(from), pair_index(to));
        let cycles = self.simple_cycles();
        let groups = self
            .skeletons(from, to)
            .into_iter()
            .map(|(mask, mut skeletons)| {
                skeletons.sort_by(|a, b| a.0.cmp(&b.0));
                let mut inside: HashMap<BigInt, Cycle> = HashMap::new();
                for (cmask, cs) in &cycles {
                    if cmask & !mask == 0 {
                        for (w, c) in cs {
                            inside.entry(w.clone()).or_insert_with(|| c.clone());
                        }
                    }
                }
                let mut cycles: Vec<(BigInt, Cycle)> = inside.into_iter().collect();
                cycles.sort_by(|a, b| a.0.cmp(&b.0));
                Group { skeletons, cycles }
            })
            .collect();
        RunValues { from, groups }
    }

    /// Exact set of run values from `from` to `to` (the empty run counts when they coincide).
    pub fn value_set(&self, from: SignPair, to: SignPair) -> SemilinearSet {
        self.run_values(from, to).value_set()
    }
}

impl RunValues {
    pub fn value_set(&self) -> SemilinearSet {
        let mut out = SemilinearSet::empty();
        for g in &self.groups {
            let weights: Vec<BigInt> = g.cycles.iter().map(|(w, _)| w.clone()).collect();
            let monoid = SemilinearSet::monoid(&weights);
            for (w, _) in &g.skeletons {
                out = out.union(&monoid.shift(w));
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.groups.iter().all(|g| g.skeletons.is_empty())
    }

    /// Transition word of some run, if any.
    pub fn any_run(&self) -> Option<Vec<usize>> {
        self.groups
            .iter()
            .flat_map(|g| &g.skeletons)
            .min_by_key(|(_, s)| s.edges.len())
            .map(|(_, s)| s.edges.clone())
    }

    /// Transition word of a run with value `value`.
    pub fn find(&self, vass: &ZVass, value: &BigInt) -> Option<Vec<usize>> {
        for g in &self.groups {
            let weights: Vec<BigInt> = g.cycles.iter().map(|(w, _)| w.clone()).collect();
            for (w, skel) in &g.skeletons {
                let Some(counts) = represent_in_monoid(&weights, &(value - w)) else { continue };
                return Some(splice(vass, self.from, &skel.edges, g, &counts));
            }
        }
        None
    }
}

/// Inserts `counts[i]` copies of cycle `i` at the first visit of its start state.
fn splice(vass: &ZVass, from: usize, skeleton: &[usize], g: &Group, counts: &[BigInt]) -> Vec<usize> {
    let mut states = vec![from];
    for &e in skeleton {
        states.push(vass.transitions[e].to);
    }
    let mut inserts: Vec<Vec<usize>> = vec![Vec::new(); skeleton.len() + 1];
    for ((_, cycle), count) in g.cycles.iter().zip(counts) {
        let pos = states.iter().position(|&s| s == cycle.start).expect("cycle lies inside the visited set");
        let reps: usize = count.try_into().expect("cycle count fits in memory");
        for _ in 0..reps {
            inserts[pos].extend_from_slice(&cycle.edges);
        }
    }
    let mut out = Vec::new();
    for (i, ins) in inserts.into_iter().enumerate() {
        out.extend(ins);
        if i < skeleton.len() {
            out.push(skeleton[i]);
        }
    }
    out
}

pub fn generator_word(vass: &ZVass, edges: &[usize]) -> Word {
    edges.iter().map(|&e| vass.transitions[e].generator).collect()
}

/// Constraint on the top-right entry `b` of a product with a fixed diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopRight {
    Any,
    Exactly(BigInt),
}

/// `(d1 b; 0 d2)·x = y`.
pub fn vector_constraint((d1, d2): SignPair, x: &Vec2, y: &Vec2) -> Option<TopRight> {
    if &x.v2 * i64::from(d2) != y.v2 {
        return None;
    }
    let rest = &y.v1 - &x.v1 * i64::from(d1);
    if x.v2.is_zero() {
        return rest.is_zero().then_some(TopRight::Any);
    }
    exact_div(&rest, &x.v2).map(TopRight::Exactly)
}

/// `yᵀ·(d1 b; 0 d2)·x = lambda`.
pub fn scalar_constraint((d1, d2): SignPair, x: &Vec2, y: &Vec2, lambda: &BigInt) -> Option<TopRight> {
    let coeff = &y.v1 * &x.v2;
    let rest = lambda - &y.v1 * &x.v1 * i64::from(d1) - &y.v2 * &x.v2 * i64::from(d2);
    if coeff.is_zero() {
        return rest.is_zero().then_some(TopRight::Any);
    }
    exact_div(&rest, &coeff).map(TopRight::Exactly)
}

/// Per diagonal sign pair, the top-right constraint a product must meet.
fn instance_constraints(inst: &ProblemInstance) -> Result<Vec<(SignPair, TopRight)>> {
    let mut out = Vec::new();
    match inst {
        ProblemInstance::Membership { target, .. } => {
            let Some(t) = target.to_ut() else { return Ok(out) };
            if let (Some(s), Some(c)) = (sign_of(&t.a), sign_of(&t.c)) {
                out.push(((s, c), TopRight::Exactly(t.b)));
            }
        }
        ProblemInstance::VectorReachability { x, y, .. } => {
            for p in SIGN_PAIRS {
                out.extend(vector_constraint(p, x, y).map(|c| (p, c)));
            }
        }
        other => {
            let (_, x, y, lambda) = other
                .as_scalar()
                .ok_or_else(|| Error::Precondition(format!("{} is not handled here", other.tag().name())))?;
            for p in SIGN_PAIRS {
                out.extend(scalar_constraint(p, x, y, &lambda).map(|c| (p, c)));
            }
        }
    }
    Ok(out)
}

fn unit_generators(inst: &ProblemInstance) -> Result<Vec<UTMat>> {
    let gens = inst
        .generators()
        .ok_or_else(|| Error::Precondition(format!("{} has no matrix generators", inst.tag().name())))?;
    gens.iter().map(unit_diagonal).collect()
}

/// Exact membership / vector / scalar reachability for generators with ±1 diagonals.
pub fn solve_detpm1(inst: &ProblemInstance) -> Result<Verdict> {
    let gens = unit_generators(inst)?;
    if let ProblemInstance::Membership { target, .. } = inst {
        let d = target.det();
        if !d.abs().is_one() {
            return Err(Error::Precondition(format!("target determinant {d} is not ±1")));
        }
    }
    let vass = build_zvass(&gens)?;
    let constraints = instance_constraints(inst)?;
    let verdicts = constraints.into_iter().map(|((s, t), c)| {
        let runs = vass.run_values((1, 1), (s, t));
        let edges = match c {
            TopRight::Any => runs.any_run(),
            // b = t·a with t = ±1
            TopRight::Exactly(b) => runs.find(&vass, &(b * i64::from(t))),
        };
        match edges {
            Some(e) => Verdict::Yes(generator_word(&vass, &e)),
            None => Verdict::No(NoCertificate::Structural),
        }
    });
    let v = disjunction(verdicts);
    debug_assert!(v.witness().is_none_or(|w| product(inst.generators().unwrap(), w).is_some()));
    Ok(v)
}

/// Data of the pairwise-product monoid used for determinant −1 generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetMinusOneSummary {
    /// gcd of the top-right entries of products with diagonal `(1, 1)`; 0 if all vanish.
    pub g: BigInt,
    /// Top-right entries of products with diagonal `(-1, -1)`, sorted.
    pub s: Vec<BigInt>,
    /// Pairwise products `G_i·G_j` with their index pairs.
    pub pairs: Vec<((usize, usize), UTMat)>,
}

impl DetMinusOneSummary {
    pub fn new(gens: &[UTMat]) -> Result<Self> {
        for g in gens {
            if g.det() != int(-1) {
                return Err(Error::Precondition(format!("generator {g:?} does not have determinant -1")));
            }
        }
        let mut pairs = Vec::new();
        for (i, a) in gens.iter().enumerate() {
            for (j, b) in gens.iter().enumerate() {
                pairs.push(((i, j), a * b));
            }
        }
        let g = pairs
            .iter()
            .filter(|(_, m)| m.a.is_one())
            .fold(BigInt::zero(), |acc, (_, m)| crate::arith::gcd(&acc, &m.b));
        let mut s: Vec<BigInt> = pairs.iter().filter(|(_, m)| !m.a.is_one()).map(|(_, m)| m.b.clone()).collect();
        s.sort();
        s.dedup();
        Ok(DetMinusOneSummary { g, s, pairs })
    }

    fn pair_with(&self, diag: i64, b: &BigInt) -> Option<(usize, usize)> {
        self.pairs.iter().find(|(_, m)| m.a == int(diag) && &m.b == b).map(|(p, _)| *p)
    }

    /// Even-length product equal to `(d tau; 0 d)`, as a generator word.
    ///
    /// Such products are `(ε, ε(σ + g·y); 0, ε)` with `σ` a sum of `k` elements
    /// of `S` and `ε = (-1)^k`, so this is one equation over free integers
    /// with a parity side condition; negative multiplicities are repaired with
    /// the zero-sum pairs `s + (-s)`.
    pub fn even_member(&self, d: i8, tau: &BigInt) -> Option<Word> {
        let target = tau * i64::from(d);
        let k = self.s.len();
        let mut row: Vec<BigInt> = self.s.clone();
        row.push(self.g.clone());
        let sys = LinearSystem::free(vec![row], vec![target.clone()])
            .and_then(|s| s.with_parity((0..k).collect(), u8::from(d < 0)))
            .ok()?;
        let values = solve_linear(&sys).ok()?.values()?.to_vec();
        let (mut x, y) = (values[..k].to_vec(), values[k].clone());
        while let Some(i) = x.iter().position(Signed::is_negative) {
            let j = self.s.binary_search(&-self.s[i].clone()).expect("S is closed under negation");
            if i == j {
                let bump = (-x[i].clone()).div_ceil(&int(2)) * 2;
                x[i] += bump;
            } else {
                let c = -x[i].clone();
                x[i] += &c;
                x[j] += c;
            }
        }

        let mut word = Word::new();
        // a (-1,-1) factor with top-right b contributes -b
        for (si, count) in self.s.iter().zip(&x) {
            let (p, q) = self.pair_with(-1, &-si.clone())?;
            for _ in 0..usize::try_from(count).ok()? {
                word.extend([p, q]);
            }
        }
        let plus: Vec<(BigInt, (usize, usize))> =
            self.pairs.iter().filter(|(_, m)| m.a.is_one()).map(|(p, m)| (m.b.clone(), *p)).collect();
        let goal = &self.g * &y;
        if !goal.is_zero() {
            let row: Vec<BigInt> = plus.iter().map(|(b, _)| b.clone()).collect();
            let sol = crate::diophantine::solve_free(&vec![row], &[goal], plus.len())?;
            for ((_, (p, q)), c) in plus.iter().zip(sol.particular) {
                let (p, q, reps) = if c.is_negative() { (*q, *p, -c) } else { (*p, *q, c) };
                for _ in 0..usize::try_from(&reps).ok()? {
                    word.extend([p, q]);
                }
            }
        }
        Some(word)
    }

    /// Whether some product has diagonal `(d1, d2)`; returns a shortest-style word.
    fn any_with_diagonal(&self, gens: &[UTMat], (d1, d2): SignPair) -> Option<Word> {
        if d1 == d2 {
            return if d1 > 0 {
                Some(Word::new())
            } else {
                self.pairs.iter().find(|(_, m)| !m.a.is_one()).map(|((p, q), _)| vec![*p, *q])
            };
        }
        gens.iter().enumerate().find_map(|(i, g)| {
            let eps = if g.a == int(i64::from(d1)) { 1 } else { -1 };
            let mut w = vec![i];
            w.extend(self.any_with_diagonal(gens, (eps, eps))?);
            Some(w)
        })
    }

    /// Word for `(d1 b; 0 d2)`, or `None` if no product equals it.
    pub fn member(&self, gens: &[UTMat], (d1, d2): SignPair, b: &BigInt) -> Option<Word> {
        if d1 == d2 {
            return self.even_member(d1, b);
        }
        let target = UTMat::new(int(i64::from(d1)), b.clone(), int(i64::from(d2)));
        gens.iter().enumerate().find_map(|(i, g)| {
            // g is its own inverse up to the diagonal: g⁻¹ = (1/a, -b/(ac); 0, 1/c)
            let inv = UTMat::new(g.a.clone(), -&g.b * &g.a * &g.c, g.c.clone());
            let rest = &inv * &target;
            let mut w = vec![i];
            w.extend(self.even_member(sign_of(&rest.a)?, &rest.b)?);
            Some(w)
        })
    }
}

/// Exact solver for generators that all have determinant −1.
pub fn solve_detminus1(inst: &ProblemInstance) -> Result<Verdict> {
    let gens = unit_generators(inst)?;
    let summary = DetMinusOneSummary::new(&gens)?;
    let constraints = instance_constraints(inst)?;
    let verdicts = constraints.into_iter().map(|(pair, c)| {
        let word = match c {
            TopRight::Any => summary.any_with_diagonal(&gens, pair),
            TopRight::Exactly(b) => summary.member(&gens, pair, &b),
        };
        word.map_or(Verdict::No(NoCertificate::Structural), Verdict::Yes)
    });
    Ok(disjunction(verdicts))
}
