//! Solvers and reductions for upper-triangular generators.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{int, ut_product, Mat2, UTMat, Vec2};
use crate::detpm1::{build_zvass, generator_word, RunValues, SignPair, ZVass, SIGN_PAIRS};
use crate::diophantine::{solve_linear, Direction, LinearOutcome, LinearSystem, SemilinearSet, VarKind};
use crate::error::{Error, Result};
use crate::instance::{disjunction, Budget, Config, Exhaustion, NoCertificate, ProblemInstance, Verdict, Word};
use crate::machines::{reach_prm, Poly, Prm, PrmBudget};
use crate::oracle;

/// Upper-triangular views of matrix generators.
pub fn ut_generators(gens: &[Mat2]) -> Result<Vec<UTMat>> {
    gens.iter()
        .map(|m| m.to_ut().ok_or_else(|| Error::Precondition(format!("generator {m:?} is not upper triangular"))))
        .collect()
}

/// Restricts to generators satisfying `keep`; returns them with their original indices.
fn restrict(gens: &[UTMat], keep: impl Fn(&UTMat) -> bool) -> (Vec<UTMat>, Vec<usize>) {
    gens.iter().enumerate().filter(|(_, g)| keep(g)).map(|(i, g)| (g.clone(), i)).unzip()
}

fn reindex(v: Verdict, map: &[usize]) -> Verdict {
    v.map_witness(|w| w.into_iter().map(|i| map[i]).collect())
}

/// All values `Π diag(G_i)` over words whose value divides `target`, with a
/// canonical word for each; `diag` picks the diagonal entry.
fn diagonal_products(gens: &[UTMat], diag: impl Fn(&UTMat) -> &BigInt + Copy, target: &BigInt) -> Vec<(BigInt, Word)> {
    // values are bounded by |target| and unit factors only flip the sign, so this terminates
    let mut seen: HashMap<BigInt, Word> = HashMap::from([(BigInt::one(), Word::new())]);
    let mut frontier = vec![BigInt::one()];
    while !frontier.is_empty() {
        let mut next_level: HashMap<BigInt, Word> = HashMap::new();
        for p in &frontier {
            for (i, g) in gens.iter().enumerate() {
                let next = p * diag(g);
                if next.is_zero() || !target.is_multiple_of(&next) || seen.contains_key(&next) {
                    continue;
                }
                let mut w = seen[p].clone();
                w.push(i);
                match next_level.get(&next) {
                    Some(best) if *best <= w => {}
                    _ => {
                        next_level.insert(next, w);
                    }
                }
            }
        }
        frontier = next_level.keys().cloned().collect();
        seen.extend(next_level);
    }
    let mut out: Vec<(BigInt, Word)> = seen.into_iter().collect();
    out.sort_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| a.1.cmp(&b.1)));
    out
}

/// Register machine tracking `(M·x)` for the suffix `M` read so far: the state
/// holds the second coordinate (and optionally whether an `A11 = 0` generator
/// fired), the register the first coordinate.
struct ColumnPrm {
    prm: Prm,
    generator_of: Vec<usize>,
    states: HashMap<(BigInt, bool), usize>,
}

fn column_prm(gens: &[UTMat], x2: &BigInt, y2: &BigInt, track_flag: bool) -> ColumnPrm {
    let mut prm = Prm::default();
    let mut states: HashMap<(BigInt, bool), usize> = HashMap::new();
    let mut generator_of = Vec::new();
    let start = (x2.clone(), false);
    states.insert(start.clone(), prm.add_state(format!("{x2}/0")));
    let mut queue = vec![start];
    while let Some((alpha, flag)) = queue.pop() {
        let from = states[&(alpha.clone(), flag)];
        for (i, g) in gens.iter().enumerate() {
            let next = &g.c * &alpha;
            if next.is_zero() || !y2.is_multiple_of(&next) {
                continue;
            }
            let nflag = track_flag && (flag || g.a.is_zero());
            let key = (next.clone(), nflag);
            let to = match states.get(&key) {
                Some(&s) => s,
                None => {
                    let s = prm.add_state(format!("{next}/{}", u8::from(nflag)));
                    states.insert(key.clone(), s);
                    queue.push(key);
                    s
                }
            };
            prm.add_transition(from, Poly::affine(g.a.clone(), &g.b * &alpha), to);
            generator_of.push(i);
        }
    }
    ColumnPrm { prm, generator_of, states }
}

impl ColumnPrm {
    /// Runs fire the rightmost generator first, so the matrix word is reversed.
    fn matrix_word(&self, run: &Word) -> Word {
        run.iter().rev().map(|&t| self.generator_of[t]).collect()
    }

    fn reach(&self, x: (&BigInt, &BigInt), y: (&BigInt, &BigInt), flag: bool, budget: &PrmBudget) -> Verdict {
        let from = Config { state: self.states[&(x.1.clone(), false)], value: x.0.clone() };
        let Some(&to_state) = self.states.get(&(y.1.clone(), flag)) else {
            return Verdict::No(NoCertificate::Structural);
        };
        let to = Config { state: to_state, value: y.0.clone() };
        reach_prm(&self.prm, &from, &to, budget).map_witness(|run| self.matrix_word(&run))
    }
}

/// Vector reachability `M·x = y` for generators with `A22 ≠ 0`.
///
/// With `x2 = 0 = y2` this is a question about products of top-left entries
/// and is answered exactly. Otherwise the second coordinate runs through
/// `x2·(divisors of y2/x2)`, and the first coordinate is the register of an
/// affine register machine over those states.
pub fn solve_vecreach_ut22(gens: &[UTMat], x: &Vec2, y: &Vec2, budget: &PrmBudget) -> Result<Verdict> {
    if let Some(g) = gens.iter().find(|g| g.c.is_zero()) {
        return Err(Error::Precondition(format!("generator {g:?} has A22 = 0")));
    }
    if x == y {
        return Ok(Verdict::Yes(Word::new()));
    }
    if x.v2.is_zero() != y.v2.is_zero() {
        return Ok(Verdict::No(NoCertificate::Structural));
    }
    if x.v2.is_zero() {
        return Ok(diagonal_factorization(gens, |g| &g.a, &x.v1, &y.v1));
    }
    let column = column_prm(gens, &x.v2, &y.v2, false);
    Ok(column.reach((&x.v1, &x.v2), (&y.v1, &y.v2), false, budget))
}

/// Is `y1 = (Π diag(G))·x1` for some word?
fn diagonal_factorization(gens: &[UTMat], diag: impl Fn(&UTMat) -> &BigInt + Copy, x1: &BigInt, y1: &BigInt) -> Verdict {
    if x1 == y1 {
        return Verdict::Yes(Word::new());
    }
    if x1.is_zero() {
        return Verdict::No(NoCertificate::Structural);
    }
    if y1.is_zero() {
        return match gens.iter().position(|g| diag(g).is_zero()) {
            Some(i) => Verdict::Yes(vec![i]),
            None => Verdict::No(NoCertificate::Structural),
        };
    }
    if !y1.is_multiple_of(x1) {
        return Verdict::No(NoCertificate::Structural);
    }
    let r = y1 / x1;
    diagonal_products(gens, diag, &r)
        .into_iter()
        .find(|(v, _)| *v == r)
        .map_or(Verdict::No(NoCertificate::Saturation), |(_, w)| Verdict::Yes(w))
}

/// Sequence of big generators with the sign pairs of the unit-diagonal
/// segments around them: `A_0·B_1·A_1 ⋯ B_l·A_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorPlan {
    /// Indices (into the big-generator list) of `B_1 … B_l`.
    pub big: Vec<usize>,
    /// Sign pair of each segment `A_0 … A_l`.
    pub signs: Vec<SignPair>,
}

/// Ordered sequences of big generators with `|Π B11| = |t11|` and `|Π B22| = |t22|`.
fn big_sequences(big: &[UTMat], t11: &BigInt, t22: &BigInt) -> Vec<Vec<usize>> {
    let (t11, t22) = (t11.abs(), t22.abs());
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, BigInt, BigInt)> = vec![(Vec::new(), BigInt::one(), BigInt::one())];
    while let Some((seq, p11, p22)) = stack.pop() {
        if p11 == t11 && p22 == t22 {
            out.push(seq.clone());
        }
        for (i, b) in big.iter().enumerate() {
            let (n11, n22) = (&p11 * b.a.abs(), &p22 * b.c.abs());
            if t11.is_multiple_of(&n11) && t22.is_multiple_of(&n22) {
                let mut s = seq.clone();
                s.push(i);
                stack.push((s, n11, n22));
            }
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Work limit for the combination search in [`solve_membership_nonzero_diag`].
const COMBINATION_LIMIT: usize = 2_000_000;

/// Finds `a_j ∈ sets_j` with `Σ coeffs_j·a_j = target`, trying one component
/// per set and solving the resulting single linear equation exactly.
fn weighted_sum_member(
    target: &BigInt,
    terms: &[(BigInt, &SemilinearSet)],
    work: &mut usize,
) -> std::result::Result<Option<Vec<BigInt>>, Exhaustion> {
    let comps: Vec<_> = terms.iter().map(|(_, s)| s.components()).collect();
    if comps.iter().any(|c| c.is_empty()) {
        return Ok(None);
    }
    let mut choice = vec![0usize; terms.len()];
    loop {
        *work += 1;
        if *work > COMBINATION_LIMIT {
            return Err(Exhaustion::SearchBound);
        }
        let mut rhs = target.clone();
        let mut row = Vec::new();
        let mut kinds = Vec::new();
        let mut owner = Vec::new();
        for (j, (mu, _)) in terms.iter().enumerate() {
            let c = &comps[j][choice[j]];
            rhs -= mu * &c.base;
            if !c.period.is_zero() {
                let sign = if c.dir == Direction::Down { -1 } else { 1 };
                row.push(mu * &c.period * sign);
                kinds.push(if c.dir == Direction::Both { VarKind::Free } else { VarKind::Nonneg });
                owner.push(j);
            }
        }
        let solved = if row.is_empty() {
            rhs.is_zero().then(Vec::new)
        } else {
            let sys = LinearSystem::new(vec![row], vec![rhs], kinds).expect("consistent dimensions");
            match solve_linear(&sys).expect("validated system") {
                LinearOutcome::Solved { values, .. } => Some(values),
                _ => None,
            }
        };
        if let Some(n) = solved {
            let mut vals: Vec<BigInt> = (0..terms.len()).map(|j| comps[j][choice[j]].base.clone()).collect();
            for (k, &j) in owner.iter().enumerate() {
                let c = &comps[j][choice[j]];
                let sign = if c.dir == Direction::Down { -1 } else { 1 };
                vals[j] += &c.period * &n[k] * sign;
            }
            return Ok(Some(vals));
        }
        let Some(pos) = (0..terms.len()).find(|&j| choice[j] + 1 < comps[j].len()) else {
            return Ok(None);
        };
        choice[pos] += 1;
        choice[..pos].iter_mut().for_each(|c| *c = 0);
    }
}

/// Exact membership for generators and target with nonzero diagonals.
///
/// Every product splits as `A_0·B_1·A_1 ⋯ B_l·A_l` with `B_j` the generators
/// having a diagonal entry of absolute value > 1 (so `l` is logarithmic in the
/// target) and `A_j` products of unit-diagonal generators. Once the `B_j` and
/// the diagonal signs of the `A_j` are fixed, the top-right entry of the
/// product is affine in the run values of the `A_j`, each ranging over a
/// semilinear set.
pub fn solve_membership_nonzero_diag(gens: &[UTMat], t: &UTMat) -> Result<Verdict> {
    if let Some(g) = gens.iter().find(|g| g.a.is_zero() || g.c.is_zero()) {
        return Err(Error::Precondition(format!("generator {g:?} has a zero diagonal entry")));
    }
    if t.a.is_zero() || t.c.is_zero() {
        return Err(Error::Precondition(format!("target {t:?} has a zero diagonal entry")));
    }
    let (unit, unit_idx) = restrict(gens, UTMat::has_unit_diagonal);
    let (big, big_idx) = restrict(gens, |g| !g.has_unit_diagonal());
    let vass = build_zvass(&unit)?;
    let runs: Vec<RunValues> = SIGN_PAIRS.iter().map(|&p| vass.run_values((1, 1), p)).collect();
    let sets: Vec<SemilinearSet> = runs.iter().map(RunValues::value_set).collect();
    let live: Vec<usize> = (0..4).filter(|&p| !sets[p].is_empty()).collect();

    let mut work = 0usize;
    let mut exhausted = false;
    for seq in big_sequences(&big, &t.a, &t.c) {
        let l = seq.len();
        let mut pattern = vec![0usize; l + 1];
        loop {
            let plan = FactorPlan { big: seq.clone(), signs: pattern.iter().map(|&k| SIGN_PAIRS[live[k]]).collect() };
            match evaluate_plan(&plan, &big, t, &sets, &mut work) {
                Ok(Some(values)) => {
                    let word = plan_word(&plan, &values, &vass, &runs, &unit_idx, &big_idx);
                    debug_assert_eq!(ut_product(gens, &word).as_ref(), Some(t));
                    return Ok(Verdict::Yes(word));
                }
                Ok(None) => {}
                Err(_) => {
                    exhausted = true;
                    break;
                }
            }
            let Some(pos) = (0..=l).find(|&j| pattern[j] + 1 < live.len()) else { break };
            pattern[pos] += 1;
            pattern[..pos].iter_mut().for_each(|c| *c = 0);
        }
        if exhausted {
            return Ok(Verdict::Unknown(Exhaustion::SearchBound));
        }
    }
    Ok(Verdict::No(NoCertificate::Structural))
}

/// Diagonals and top-right equation of one plan; returns the segment run values.
fn evaluate_plan(
    plan: &FactorPlan,
    big: &[UTMat],
    t: &UTMat,
    sets: &[SemilinearSet],
    work: &mut usize,
) -> std::result::Result<Option<Vec<BigInt>>, Exhaustion> {
    // factor list: segments carry their signs and an unknown top-right entry
    let mut diag: Vec<(BigInt, BigInt)> = Vec::new();
    for (j, &(s, tt)) in plan.signs.iter().enumerate() {
        diag.push((int(i64::from(s)), int(i64::from(tt))));
        if let Some(&b) = plan.big.get(j) {
            diag.push((big[b].a.clone(), big[b].c.clone()));
        }
    }
    let p11: BigInt = diag.iter().map(|d| &d.0).product();
    let p22: BigInt = diag.iter().map(|d| &d.1).product();
    if p11 != t.a || p22 != t.c {
        return Ok(None);
    }
    let n = diag.len();
    let mut prefix = vec![BigInt::one(); n + 1];
    for k in 0..n {
        prefix[k + 1] = &prefix[k] * &diag[k].0;
    }
    let mut suffix = vec![BigInt::one(); n + 1];
    for k in (0..n).rev() {
        suffix[k] = &suffix[k + 1] * &diag[k].1;
    }
    let lambda = |k: usize| &prefix[k] * &suffix[k + 1];
    let mut rhs = t.b.clone();
    for (j, &b) in plan.big.iter().enumerate() {
        rhs -= lambda(2 * j + 1) * &big[b].b;
    }
    let terms: Vec<(BigInt, &SemilinearSet)> = plan
        .signs
        .iter()
        .enumerate()
        .map(|(j, &(_, tt))| (lambda(2 * j) * i64::from(tt), &sets[crate::detpm1::pair_index(plan.signs[j])]))
        .collect();
    weighted_sum_member(&rhs, &terms, work)
}

fn plan_word(
    plan: &FactorPlan,
    values: &[BigInt],
    vass: &ZVass,
    runs: &[RunValues],
    unit_idx: &[usize],
    big_idx: &[usize],
) -> Word {
    let mut word = Word::new();
    for (j, (&pair, value)) in plan.signs.iter().zip(values).enumerate() {
        let edges = runs[crate::detpm1::pair_index(pair)].find(vass, value).expect("value lies in the run set");
        word.extend(generator_word(vass, &edges).into_iter().map(|i| unit_idx[i]));
        if let Some(&b) = plan.big.get(j) {
            word.push(big_idx[b]);
        }
    }
    word
}

/// Membership for generators with `A22 ≠ 0`.
///
/// A target with `T11 ≠ 0` can only use generators with `A11 ≠ 0`. A target
/// with `T11 = 0` is determined by its second column, reached from `(0, 1)`
/// while remembering that some `A11 = 0` generator fired.
pub fn solve_membership_one_zero(gens: &[UTMat], t: &UTMat, budget: &PrmBudget) -> Result<Verdict> {
    if let Some(g) = gens.iter().find(|g| g.c.is_zero()) {
        return Err(Error::Precondition(format!("generator {g:?} has A22 = 0")));
    }
    if t.c.is_zero() {
        return Ok(Verdict::No(NoCertificate::Structural));
    }
    if !t.a.is_zero() {
        let (sub, idx) = restrict(gens, |g| !g.a.is_zero());
        return Ok(reindex(solve_membership_nonzero_diag(&sub, t)?, &idx));
    }
    let column = column_prm(gens, &BigInt::one(), &t.c, true);
    Ok(column.reach((&BigInt::zero(), &BigInt::one()), (&t.b, &t.c), true, budget))
}

/// Mirror image of [`solve_membership_one_zero`] for generators with `A11 ≠ 0`:
/// `(a b; 0 c) ↦ (c b; 0 a)` reverses products.
pub fn solve_membership_one_zero_mirrored(gens: &[UTMat], t: &UTMat, budget: &PrmBudget) -> Result<Verdict> {
    let flipped: Vec<UTMat> = gens.iter().map(UTMat::anti_transpose).collect();
    let v = solve_membership_one_zero(&flipped, &t.anti_transpose(), budget)?;
    Ok(v.map_witness(|mut w| {
        w.reverse();
        w
    }))
}

/// A scalar-reachability question arising from a zero-diagonal target:
/// `T = M·A·M''·B·M'` with `yᵀ·M''·x = λ` for `y = (A11, A12)`, `x = (B12, B22)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarQuery {
    pub instance: ProblemInstance,
    pub prefix: Word,
    pub left: usize,
    pub right: usize,
    pub suffix: Word,
}

impl ScalarQuery {
    pub fn witness(&self, middle: &Word) -> Word {
        let mut w = self.prefix.clone();
        w.push(self.left);
        w.extend(middle);
        w.push(self.right);
        w.extend(&self.suffix);
        w
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipReduction {
    /// Decided without further queries.
    Direct(Verdict),
    /// Some diagonal entry of the target is nonzero.
    NonzeroDiagonal,
    /// Zero diagonal, nonzero top-right: a direct witness if one of the
    /// single-factor forms applies, and the scalar questions otherwise.
    Scalar { direct: Option<Word>, queries: Vec<ScalarQuery> },
}

/// Case analysis reducing UT membership to the solvers above and to scalar reachability.
pub fn reduce_membership_to_scalar(gens: &[UTMat], t: &UTMat) -> MembershipReduction {
    if t.a.is_zero() && t.b.is_zero() && t.c.is_zero() {
        return MembershipReduction::Direct(match ut_mortality_witness(gens) {
            Some(w) => Verdict::Yes(w),
            None => Verdict::No(NoCertificate::Structural),
        });
    }
    if !t.a.is_zero() || !t.c.is_zero() {
        return MembershipReduction::NonzeroDiagonal;
    }
    let lefts = diagonal_products(gens, |g| &g.a, &t.b);
    let rights = diagonal_products(gens, |g| &g.c, &t.b);
    let mut direct = None;
    let mut queries = Vec::new();
    for (alpha, prefix) in &lefts {
        for (beta, suffix) in &rights {
            let ab = alpha * beta;
            if !t.b.is_multiple_of(&ab) {
                continue;
            }
            let lambda = &t.b / &ab;
            for (i, a) in gens.iter().enumerate().filter(|(_, g)| g.c.is_zero()) {
                if direct.is_none() && a.a.is_zero() && a.b == lambda {
                    let mut w = prefix.clone();
                    w.push(i);
                    w.extend(suffix);
                    direct = Some(w);
                }
                for (j, b) in gens.iter().enumerate().filter(|(_, g)| g.a.is_zero()) {
                    queries.push(ScalarQuery {
                        instance: ProblemInstance::ScalarReachability {
                            generators: gens.iter().map(UTMat::to_mat2).collect(),
                            x: Vec2::new(b.b.clone(), b.c.clone()),
                            y: Vec2::new(a.a.clone(), a.b.clone()),
                            lambda: lambda.clone(),
                        },
                        prefix: prefix.clone(),
                        left: i,
                        right: j,
                        suffix: suffix.clone(),
                    });
                }
            }
        }
    }
    MembershipReduction::Scalar { direct, queries }
}

/// Scalar reachability `yᵀ·M·x = lambda` over upper-triangular generators.
/// When `x2 = 0` or `y1 = 0` the value is a diagonal product times a constant
/// and is decided exactly; otherwise the budgeted oracle answers.
pub fn solve_ut_scalar(gens: &[UTMat], x: &Vec2, y: &Vec2, lambda: &BigInt, budget: &Budget) -> Verdict {
    if x.v2.is_zero() {
        return diagonal_factorization(gens, |g| &g.a, &(&y.v1 * &x.v1), lambda);
    }
    if y.v1.is_zero() {
        return diagonal_factorization(gens, |g| &g.c, &(&y.v2 * &x.v2), lambda);
    }
    let mats: Vec<Mat2> = gens.iter().map(UTMat::to_mat2).collect();
    oracle::scalar_reachability(&mats, x, y, lambda, budget)
}

/// Membership over arbitrary upper-triangular generators; scalar questions
/// go to the budgeted oracle.
pub fn solve_ut_membership(gens: &[UTMat], t: &UTMat, prm: &PrmBudget, oracle_budget: &Budget) -> Result<Verdict> {
    match reduce_membership_to_scalar(gens, t) {
        MembershipReduction::Direct(v) => Ok(v),
        MembershipReduction::NonzeroDiagonal => {
            if !t.c.is_zero() {
                let (sub, idx) = restrict(gens, |g| !g.c.is_zero());
                Ok(reindex(solve_membership_one_zero(&sub, t, prm)?, &idx))
            } else {
                let (sub, idx) = restrict(gens, |g| !g.a.is_zero());
                Ok(reindex(solve_membership_one_zero_mirrored(&sub, t, prm)?, &idx))
            }
        }
        MembershipReduction::Scalar { direct: Some(w), .. } => Ok(Verdict::Yes(w)),
        MembershipReduction::Scalar { direct: None, queries } => {
            let verdicts = queries.iter().map(|q| {
                let ProblemInstance::ScalarReachability { x, y, lambda, .. } = &q.instance else {
                    unreachable!("queries are scalar reachability instances")
                };
                solve_ut_scalar(gens, x, y, lambda, oracle_budget).map_witness(|w| q.witness(&w))
            });
            Ok(disjunction(verdicts))
        }
    }
}

/// Artifacts of the sign-invariant scalar-to-membership reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseSplit {
    /// Generators with `A22 = 0`.
    pub a: Vec<usize>,
    /// Generators with `A11 = 0`.
    pub b: Vec<usize>,
    /// The remaining generators.
    pub c: Vec<usize>,
    pub x_mat: UTMat,
    pub y_mat: UTMat,
    pub a_prime: Vec<usize>,
    pub b_prime: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignInvariantReduction {
    /// `y1 = 0` or `x2 = 0`: the value is `y2·M22·x2` or `y1·M11·x1`, and the
    /// empty product decides.
    Direct(bool),
    Queries { split: CaseSplit, queries: Vec<ProblemInstance> },
}

/// Does `yᵀ·M·x ∈ {-1, 1}` for some product `M`? Reduced to membership of
/// `(0 ±1; 0 0)` in `⟨C ∪ {A, B}⟩` for `A ∈ A' ∪ {Y}`, `B ∈ B' ∪ {X}`, using
/// `Y·M·X = (0, yᵀMx; 0, 0)`.
pub fn reduce_signinv_scalar_to_membership(gens: &[UTMat], x: &Vec2, y: &Vec2) -> SignInvariantReduction {
    if y.v1.is_zero() {
        return SignInvariantReduction::Direct((&y.v2 * &x.v2).abs().is_one());
    }
    if x.v2.is_zero() {
        return SignInvariantReduction::Direct((&y.v1 * &x.v1).abs().is_one());
    }
    let unit_y = y.v1.abs().is_one();
    let unit_x = x.v2.abs().is_one();
    let idx = |p: &dyn Fn(&UTMat) -> bool| -> Vec<usize> { (0..gens.len()).filter(|&i| p(&gens[i])).collect() };
    let a = idx(&|g| g.c.is_zero());
    let b = idx(&|g| g.a.is_zero());
    let c = idx(&|g| !g.a.is_zero() && !g.c.is_zero());
    // a generator with both diagonal entries zero stands for the whole middle
    // of the product, so it needs both unit conditions
    let a_prime = a.iter().copied().filter(|&i| unit_y && (!gens[i].a.is_zero() || unit_x)).collect();
    let b_prime = b.iter().copied().filter(|&i| unit_x && (!gens[i].c.is_zero() || unit_y)).collect();
    let split = CaseSplit {
        a,
        b,
        c,
        x_mat: UTMat::new(int(0), x.v1.clone(), x.v2.clone()),
        y_mat: UTMat::new(y.v1.clone(), y.v2.clone(), int(0)),
        a_prime,
        b_prime,
    };
    let lefts: Vec<UTMat> =
        split.a_prime.iter().map(|&i| gens[i].clone()).chain(std::iter::once(split.y_mat.clone())).collect();
    let rights: Vec<UTMat> =
        split.b_prime.iter().map(|&i| gens[i].clone()).chain(std::iter::once(split.x_mat.clone())).collect();
    let mut queries = Vec::new();
    for l in &lefts {
        for r in &rights {
            let mut generators: Vec<Mat2> = split.c.iter().map(|&i| gens[i].to_mat2()).collect();
            generators.push(l.to_mat2());
            generators.push(r.to_mat2());
            for sign in [1, -1] {
                queries.push(ProblemInstance::Membership {
                    generators: generators.clone(),
                    target: Mat2::from_i64([[0, sign], [0, 0]]),
                });
            }
        }
    }
    SignInvariantReduction::Queries { split, queries }
}

/// A zero product exists iff some generator has `A11 = 0` and some has `A22 = 0`.
pub fn ut_mortality(gens: &[UTMat]) -> bool {
    ut_mortality_witness(gens).is_some()
}

pub fn ut_mortality_witness(gens: &[UTMat]) -> Option<Word> {
    if let Some(i) = gens.iter().position(|g| g.a.is_zero() && g.b.is_zero() && g.c.is_zero()) {
        return Some(vec![i]);
    }
    let i = gens.iter().position(|g| g.a.is_zero())?;
    let j = gens.iter().position(|g| g.c.is_zero())?;
    Some(vec![i, j])
}
