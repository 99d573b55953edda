//! One-register machines: polynomial register machines (PRM), their affine
//! special case (ARM), bounded one-counter automata (BCA), and the
//! polynomial-size simulation of a BCA by an ARM.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::int;
use crate::error::{Error, Result};
use crate::instance::{Config, Exhaustion, NoCertificate, Verdict, Word};
use crate::search::{canonical_bfs, Extend, Outcome};

/// Integer polynomial, coefficients in ascending order, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `x ↦ a·x + b`.
    pub fn affine(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Poly::new(vec![b.into(), a.into()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_affine(&self) -> bool {
        self.coeffs.len() <= 2
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}x"),
                _ => format!("{c}x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrmTransition {
    pub from: usize,
    pub update: Poly,
    pub to: usize,
}

/// A polynomial register machine; each labelled edge is one transition.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Prm {
    pub states: Vec<String>,
    pub transitions: Vec<PrmTransition>,
}

impl Prm {
    pub fn add_state(&mut self, name: impl Into<String>) -> usize {
        self.states.push(name.into());
        self.states.len() - 1
    }

    pub fn add_transition(&mut self, from: usize, update: Poly, to: usize) -> usize {
        self.transitions.push(PrmTransition { from, update, to });
        self.transitions.len() - 1
    }

    pub fn is_affine(&self) -> bool {
        self.transitions.iter().all(|t| t.update.is_affine())
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn validate(&self) -> Result<()> {
        for t in &self.transitions {
            if t.from >= self.states.len() || t.to >= self.states.len() {
                return Err(Error::Malformed(format!("transition refers to unknown state: {t:?}")));
            }
        }
        Ok(())
    }

    /// Fires the transitions of `word` from `from`; `None` if some transition
    /// does not leave the current state.
    pub fn replay(&self, from: &Config, word: &[usize]) -> Option<Config> {
        let mut cur = from.clone();
        for &i in word {
            let t = self.transitions.get(i)?;
            if t.from != cur.state {
                return None;
            }
            cur = Config { state: t.to, value: t.update.eval(&cur.value) };
        }
        Some(cur)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BcaTransition {
    pub from: usize,
    pub delta: BigInt,
    pub to: usize,
}

/// Bounded one-counter automaton: the counter lives in `[0, bound]` and a
/// transition is enabled only if it keeps the counter there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bca {
    pub states: Vec<String>,
    pub bound: BigInt,
    pub transitions: Vec<BcaTransition>,
}

impl Bca {
    pub fn new(states: Vec<String>, bound: impl Into<BigInt>, transitions: Vec<(usize, i64, usize)>) -> Result<Self> {
        let bca = Bca {
            states,
            bound: bound.into(),
            transitions: transitions
                .into_iter()
                .map(|(from, d, to)| BcaTransition { from, delta: int(d), to })
                .collect(),
        };
        bca.validate()?;
        Ok(bca)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bound.is_negative() {
            return Err(Error::Malformed("negative counter bound".into()));
        }
        for t in &self.transitions {
            if t.from >= self.states.len() || t.to >= self.states.len() {
                return Err(Error::Malformed(format!("transition refers to unknown state: {t:?}")));
            }
            if t.delta.abs() > self.bound {
                return Err(Error::Malformed(format!(
                    "update {} exceeds bound {}",
                    t.delta, self.bound
                )));
            }
        }
        Ok(())
    }

    pub fn in_range(&self, c: &BigInt) -> bool {
        !c.is_negative() && c <= &self.bound
    }

    fn check_config(&self, c: &Config) -> Result<()> {
        if c.state >= self.states.len() {
            return Err(Error::Malformed(format!("unknown state index {}", c.state)));
        }
        if !self.in_range(&c.value) {
            return Err(Error::CounterOutOfRange { value: c.value.to_string(), bound: self.bound.to_string() });
        }
        Ok(())
    }

    pub fn step(&self, cur: &Config, transition: usize) -> Option<Config> {
        let t = self.transitions.get(transition)?;
        if t.from != cur.state {
            return None;
        }
        let value = &cur.value + &t.delta;
        self.in_range(&value).then_some(Config { state: t.to, value })
    }

    pub fn replay(&self, from: &Config, word: &[usize]) -> Option<Config> {
        word.iter().try_fold(from.clone(), |cur, &i| self.step(&cur, i))
    }
}

/// Exact reachability in a BCA: the configuration space `Q × [0, b]` is
/// finite, so breadth-first search is complete.
pub fn reach_bca(m: &Bca, from: &Config, to: &Config) -> Result<Verdict> {
    m.check_config(from)?;
    m.check_config(to)?;
    let space: usize = (&m.bound + 1u32)
        .try_into()
        .ok()
        .and_then(|b: usize| b.checked_mul(m.states.len().max(1)))
        .ok_or_else(|| Error::Precondition("configuration space too large".into()))?;
    let (outcome, _) = canonical_bfs(
        from.clone(),
        m.transitions.len(),
        Extend::Append,
        space + 1,
        |c, t| m.step(c, t),
        |_| true,
        |c| c == to,
    );
    Ok(match outcome {
        Outcome::Found { word, .. } => Verdict::Yes(word),
        Outcome::Saturated | Outcome::Truncated => Verdict::No(NoCertificate::Saturation),
        Outcome::DepthExhausted => unreachable!("depth bound covers the configuration space"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrmBudget {
    pub max_steps: usize,
    pub max_magnitude: Option<BigInt>,
    /// Discard configurations outside a backward interval over-approximation
    /// of the configurations that can still reach the target.
    pub prune: bool,
}

impl PrmBudget {
    pub fn new(max_steps: usize, max_magnitude: Option<BigInt>) -> Self {
        PrmBudget { max_steps, max_magnitude, prune: true }
    }

    pub fn without_pruning(mut self) -> Self {
        self.prune = false;
        self
    }
}

impl Default for PrmBudget {
    fn default() -> Self {
        PrmBudget::new(10_000, Some(BigInt::from(1_000_000_000u64)))
    }
}

/// Closed integer interval with optional infinite ends.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Interval {
    lo: Option<BigInt>,
    hi: Option<BigInt>,
}

impl Interval {
    fn point(v: &BigInt) -> Self {
        Interval { lo: Some(v.clone()), hi: Some(v.clone()) }
    }

    fn full() -> Self {
        Interval { lo: None, hi: None }
    }

    fn contains(&self, v: &BigInt) -> bool {
        self.lo.as_ref().is_none_or(|lo| lo <= v) && self.hi.as_ref().is_none_or(|hi| v <= hi)
    }

    fn hull(&self, other: &Interval) -> Interval {
        let lo = match (&self.lo, &other.lo) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            _ => None,
        };
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) => Some(a.max(b).clone()),
            _ => None,
        };
        Interval { lo, hi }
    }

    /// `{x : p(x) ∈ self}` over-approximated by an interval; `None` if empty.
    fn preimage(&self, p: &Poly) -> Option<Interval> {
        match p.degree() {
            0 if p.coeffs().len() <= 1 => self.contains(&p.coeff(0)).then(Interval::full),
            1 => {
                let (a, b) = (p.coeff(1), p.coeff(0));
                let shift = |bound: &Option<BigInt>| bound.as_ref().map(|v| v - &b);
                let (l, h) = (shift(&self.lo), shift(&self.hi));
                let (lo, hi) = if a.is_positive() {
                    (l.map(|v| v.div_ceil(&a)), h.map(|v| v.div_floor(&a)))
                } else {
                    (h.map(|v| v.div_ceil(&a)), l.map(|v| v.div_floor(&a)))
                };
                match (&lo, &hi) {
                    (Some(lo), Some(hi)) if lo > hi => None,
                    _ => Some(Interval { lo, hi }),
                }
            }
            _ => Some(Interval::full()),
        }
    }
}

/// Backward fixpoint of interval pre-images from the target configuration.
/// Configurations outside the result provably cannot reach the target.
fn coreachable_hull(m: &Prm, to: &Config) -> Vec<Option<Interval>> {
    const WIDEN_AFTER: usize = 256;
    let mut hull: Vec<Option<Interval>> = vec![None; m.states.len()];
    hull[to.state] = Some(Interval::point(&to.value));
    let mut round = 0;
    loop {
        let mut changed = vec![false; m.states.len()];
        for t in &m.transitions {
            let Some(target) = &hull[t.to] else { continue };
            let Some(pre) = target.preimage(&t.update) else { continue };
            let merged = match &hull[t.from] {
                Some(cur) => cur.hull(&pre),
                None => pre,
            };
            if hull[t.from].as_ref() != Some(&merged) {
                hull[t.from] = Some(merged);
                changed[t.from] = true;
            }
        }
        if !changed.contains(&true) {
            return hull;
        }
        round += 1;
        if round >= WIDEN_AFTER {
            for (h, c) in hull.iter_mut().zip(changed) {
                if c {
                    *h = Some(Interval::full());
                }
            }
        }
    }
}

/// Budgeted reachability in a PRM.
///
/// Yes comes with the canonical transition word. No is only issued when the
/// explored set closed up with every successor inside the magnitude cap (after
/// discarding configurations the backward interval analysis proves dead, when
/// pruning is enabled); otherwise the answer is Unknown.
pub fn reach_prm(m: &Prm, from: &Config, to: &Config, budget: &PrmBudget) -> Verdict {
    if from == to {
        return Verdict::Yes(Vec::new());
    }
    let hull = budget.prune.then(|| coreachable_hull(m, to));
    let alive = |c: &Config| {
        hull.as_ref()
            .is_none_or(|h| h[c.state].as_ref().is_some_and(|iv| iv.contains(&c.value)))
    };
    if !alive(from) {
        return Verdict::No(NoCertificate::Structural);
    }
    let (outcome, _) = canonical_bfs(
        from.clone(),
        m.transitions.len(),
        Extend::Append,
        budget.max_steps,
        |c, i| {
            let t = &m.transitions[i];
            if t.from != c.state {
                return None;
            }
            let next = Config { state: t.to, value: t.update.eval(&c.value) };
            alive(&next).then_some(next)
        },
        |c| budget.max_magnitude.as_ref().is_none_or(|cap| &c.value.abs() <= cap),
        |c| c == to,
    );
    match outcome {
        Outcome::Found { word, .. } => Verdict::Yes(word),
        Outcome::Saturated => Verdict::No(NoCertificate::Saturation),
        Outcome::Truncated => Verdict::Unknown(Exhaustion::Magnitude),
        Outcome::DepthExhausted => Verdict::Unknown(Exhaustion::Length),
    }
}

/// Constants of the BCA-to-ARM simulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionParams {
    /// Bound of the source automaton.
    pub b: BigInt,
    /// Number of binary digits guessed by the gadget.
    pub j: u32,
    /// Padded bound `2^j - 1 >= b`.
    pub big_b: BigInt,
    /// Multiplier `2·big_b + 1`.
    pub k: BigInt,
}

impl ReductionParams {
    pub fn for_bound(b: &BigInt) -> Self {
        let j = if b.is_zero() {
            1
        } else {
            // ⌈log2 b⌉ = bit length of b - 1
            let ceil_log = (b - 1u32).bits() as u32;
            ceil_log + 1
        };
        let big_b = (BigInt::one() << j) - 1u32;
        let k = &big_b * 2u32 + 1u32;
        ReductionParams { b: b.clone(), j, big_b, k }
    }
}

/// `(k+1)·c - i·k`: equals `c` when the guess `i` matches `c`, and lands
/// outside `[-b, 2b]` otherwise (for `k = 2b + 1`, `i ∈ [0, b]`).
pub fn shifted_value(k: &BigInt, i: &BigInt, c: &BigInt) -> BigInt {
    (k + 1u32) * c - i * k
}

/// Output of [`reduce_bca_to_arm`].
#[derive(Clone, Debug)]
pub struct ArmReduction {
    pub machine: Prm,
    pub from: Config,
    pub to: Config,
    pub params: ReductionParams,
    /// The bound-padded automaton the ARM simulates.
    pub padded: Bca,
    /// For each ARM state, the padded-automaton state it stands for (gadget states map to `None`).
    pub simulated: Vec<Option<usize>>,
}

/// Pads every transition through two auxiliary states so that the automaton
/// works with bound `2^j - 1` but still enforces the original bound `b`.
pub fn pad_bca(m: &Bca, params: &ReductionParams) -> Bca {
    let mut states = m.states.clone();
    let mut transitions = Vec::with_capacity(3 * m.transitions.len());
    let slack = &params.big_b - &params.b;
    for (n, t) in m.transitions.iter().enumerate() {
        states.push(format!("{}'1#{n}", m.states[t.to]));
        let q1 = states.len() - 1;
        states.push(format!("{}'2#{n}", m.states[t.to]));
        let q2 = states.len() - 1;
        transitions.push(BcaTransition { from: t.from, delta: t.delta.clone(), to: q1 });
        transitions.push(BcaTransition { from: q1, delta: slack.clone(), to: q2 });
        transitions.push(BcaTransition { from: q2, delta: -slack.clone(), to: t.to });
    }
    Bca { states, bound: params.big_b.clone(), transitions }
}

/// Builds an affine register machine whose reachability between the
/// corresponding configurations matches the automaton's.
///
/// Each padded transition `(q, p, q')` becomes the chain
/// `q --(k+1)x--> r0 --[x - 2^0 k | x]--> r1 … rj --x+p--> q'`; the digit
/// gadget subtracts `i·k` for a guessed `i ∈ [0, 2^j - 1]`.
pub fn reduce_bca_to_arm(m: &Bca, from: &Config, to: &Config) -> Result<ArmReduction> {
    m.validate()?;
    m.check_config(from)?;
    m.check_config(to)?;
    let params = ReductionParams::for_bound(&m.bound);
    let padded = pad_bca(m, &params);

    let mut arm = Prm { states: padded.states.clone(), transitions: Vec::new() };
    let mut simulated: Vec<Option<usize>> = (0..padded.states.len()).map(Some).collect();
    for (n, t) in padded.transitions.iter().enumerate() {
        let gadget: Vec<usize> = (0..=params.j)
            .map(|k| {
                simulated.push(None);
                arm.add_state(format!("r{k}#{n}"))
            })
            .collect();
        arm.add_transition(t.from, Poly::affine(&params.k + 1u32, 0), gadget[0]);
        for k in 0..params.j as usize {
            let dec = (BigInt::one() << k) * &params.k;
            arm.add_transition(gadget[k], Poly::affine(1, -dec), gadget[k + 1]);
            arm.add_transition(gadget[k], Poly::affine(1, 0), gadget[k + 1]);
        }
        arm.add_transition(gadget[params.j as usize], Poly::affine(1, t.delta.clone()), t.to);
    }
    Ok(ArmReduction { machine: arm, from: from.clone(), to: to.clone(), params, padded, simulated })
}

impl ArmReduction {
    /// Step and magnitude budget large enough for the simulation of any
    /// shortest automaton run.
    pub fn sufficient_budget(&self) -> PrmBudget {
        let p = &self.params;
        let configs = self.padded.states.len() as u64 * (p.big_b.clone() + 1u32).try_into().unwrap_or(u64::MAX);
        let steps = configs.saturating_mul(u64::from(p.j) + 3);
        let magnitude = (&p.big_b + 1u32) * (&p.k + 1u32);
        PrmBudget::new(steps as usize, Some(magnitude))
    }

    /// Maps an ARM run back to the padded automaton's transition word.
    pub fn padded_word(&self, arm_word: &Word) -> Word {
        let per = self.params.j as usize * 2 + 2;
        arm_word.iter().filter(|&&t| t % per == 0).map(|&t| t / per).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("q{i}")).collect()
    }

    #[test]
    fn bca_examples() {
        let m = Bca::new(names(1), 2, vec![(0, 1, 0)]).unwrap();
        let v = reach_bca(&m, &Config::new(0, 0), &Config::new(0, 2)).unwrap();
        assert_eq!(v, Verdict::Yes(vec![0, 0]));
        assert!(matches!(
            reach_bca(&m, &Config::new(0, 0), &Config::new(0, 3)),
            Err(Error::CounterOutOfRange { .. })
        ));
        let m = Bca::new(names(2), 2, vec![(0, 2, 1), (1, -1, 0)]).unwrap();
        let v = reach_bca(&m, &Config::new(0, 0), &Config::new(0, 1)).unwrap();
        assert_eq!(v, Verdict::Yes(vec![0, 1]));
        assert_eq!(m.replay(&Config::new(0, 0), &[0, 1]), Some(Config::new(0, 1)));
    }

    #[test]
    fn bca_rejects_oversized_update() {
        assert!(Bca::new(names(1), 1, vec![(0, 2, 0)]).is_err());
    }

    #[test]
    fn prm_examples() {
        let mut m = Prm::default();
        let q = m.add_state("q");
        m.add_transition(q, Poly::affine(1, 1), q);
        let v = reach_prm(&m, &Config::new(q, 0), &Config::new(q, 5), &PrmBudget::default());
        assert_eq!(v, Verdict::Yes(vec![0; 5]));

        let mut m = Prm::default();
        let q = m.add_state("q");
        m.add_transition(q, Poly::affine(2, 0), q);
        let capped = PrmBudget::new(100, Some(int(100)));
        let v = reach_prm(&m, &Config::new(q, 1), &Config::new(q, 3), &capped.clone().without_pruning());
        assert_eq!(v, Verdict::Unknown(Exhaustion::Magnitude));
        // 3 has no integer preimage under 2x, so the backward hull excludes the start
        let v = reach_prm(&m, &Config::new(q, 1), &Config::new(q, 3), &capped);
        assert!(v.is_no());
        let v = reach_prm(&m, &Config::new(q, 1), &Config::new(q, 8), &PrmBudget::default());
        assert_eq!(v, Verdict::Yes(vec![0, 0, 0]));

        let mut m = Prm::default();
        let q = m.add_state("q");
        let v = reach_prm(&m, &Config::new(q, 7), &Config::new(q, 7), &PrmBudget::default());
        assert_eq!(v, Verdict::Yes(vec![]));
    }

    #[test]
    fn prm_polynomial_updates() {
        let mut m = Prm::default();
        let q = m.add_state("q");
        m.add_transition(q, Poly::new(vec![int(1), int(0), int(1)]), q); // x^2 + 1
        let v = reach_prm(&m, &Config::new(q, 1), &Config::new(q, 5), &PrmBudget::default());
        assert_eq!(v, Verdict::Yes(vec![0, 0]));
        assert_eq!(m.replay(&Config::new(q, 1), &[0, 0]), Some(Config::new(q, 5)));
    }

    #[test]
    fn interval_preimages() {
        let iv = Interval { lo: Some(int(3)), hi: Some(int(10)) };
        assert_eq!(
            iv.preimage(&Poly::affine(3, 1)),
            Some(Interval { lo: Some(int(1)), hi: Some(int(3)) })
        );
        assert_eq!(
            iv.preimage(&Poly::affine(-2, 0)),
            Some(Interval { lo: Some(int(-5)), hi: Some(int(-2)) })
        );
        assert_eq!(Interval::point(&int(3)).preimage(&Poly::affine(2, 0)), None);
        assert_eq!(iv.preimage(&Poly::affine(0, 4)), Some(Interval::full()));
        assert_eq!(iv.preimage(&Poly::affine(0, 40)), None);
    }

    #[test]
    fn reduction_params() {
        let p = ReductionParams::for_bound(&int(2));
        assert_eq!((p.j, p.big_b.clone(), p.k.clone()), (2, int(3), int(7)));
        let p0 = ReductionParams::for_bound(&int(0));
        assert_eq!((p0.j, p0.big_b), (1, int(1)));
        let p4 = ReductionParams::for_bound(&int(4));
        assert_eq!((p4.j, p4.big_b), (3, int(7)));
        let p5 = ReductionParams::for_bound(&int(5));
        assert_eq!((p5.j, p5.big_b), (4, int(15)));
        assert_eq!(shifted_value(&int(5), &int(1), &int(2)), int(7));
    }

    #[test]
    fn gadget_decrements() {
        let m = Bca::new(names(2), 2, vec![(0, 1, 1)]).unwrap();
        let red = reduce_bca_to_arm(&m, &Config::new(0, 0), &Config::new(1, 1)).unwrap();
        assert!(red.machine.is_affine());
        let decs: Vec<BigInt> = red
            .machine
            .transitions
            .iter()
            .filter(|t| t.update.coeff(1) == int(1) && t.update.coeff(0).is_negative() && t.update.coeff(0) != int(-1))
            .map(|t| -t.update.coeff(0))
            .take(2)
            .collect();
        assert_eq!(decs, vec![int(7), int(14)]);
    }

    #[test]
    fn tiny_reduction_equivalence() {
        let m = Bca::new(names(2), 1, vec![(0, 1, 1)]).unwrap();
        let (from, to) = (Config::new(0, 0), Config::new(1, 1));
        let red = reduce_bca_to_arm(&m, &from, &to).unwrap();
        let direct = reach_bca(&m, &from, &to).unwrap();
        let simulated = reach_prm(&red.machine, &red.from, &red.to, &red.sufficient_budget());
        assert!(direct.is_yes());
        let w = simulated.witness().expect("reduced machine reaches the target");
        assert_eq!(red.machine.replay(&red.from, w), Some(red.to.clone()));
        let padded = red.padded_word(w);
        assert_eq!(red.padded.replay(&from, &padded), Some(to.clone()));

        let unreachable = Config::new(1, 0);
        let simulated = reach_prm(&red.machine, &red.from, &unreachable, &red.sufficient_budget());
        assert!(simulated.is_no());
    }
}
