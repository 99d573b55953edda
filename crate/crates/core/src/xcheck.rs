//! Seeded random instance families and the solver-versus-oracle cross-check.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{int, product, AffineMap, Mat2, Vec2};
use crate::dispatch::{solve, verify_verdict, SolveOptions, Solver};
use crate::error::{Error, Result};
use crate::instance::{Budget, Config, ProblemInstance, Verdict};
use crate::io::write_instance;
use crate::machines::{reach_bca, reach_prm, Bca, BcaTransition};
use crate::mortality::solve_mortality_report;
use crate::oracle::oracle_solve;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Upper-triangular generators with diagonal entries ±1.
    Detpm1,
    /// Upper-triangular generators of determinant −1.
    Detminus1,
    /// Generators of determinant 0 or 1.
    Mortality,
    /// Arbitrary upper-triangular generators.
    Ut,
    /// Integer affine maps.
    Affine,
    /// Bounded one-counter automata.
    Bca,
}

impl Family {
    pub const ALL: [Family; 6] =
        [Family::Detpm1, Family::Detminus1, Family::Mortality, Family::Ut, Family::Affine, Family::Bca];

    pub fn name(self) -> &'static str {
        match self {
            Family::Detpm1 => "detpm1",
            Family::Detminus1 => "detminus1",
            Family::Mortality => "mortality",
            Family::Ut => "ut",
            Family::Affine => "affine",
            Family::Bca => "bca",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown family {s:?}")))
    }
}

/// Shape of a random instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    /// Fixed generator count; `None` draws from `1..=4`.
    pub generators: Option<usize>,
    /// Entries are drawn from `[-entry, entry]`.
    pub entry: i64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec { generators: None, entry: 3 }
    }
}

/// The generator for instance `index` of a seeded run.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn entry(rng: &mut impl Rng, e: i64) -> BigInt {
    int(rng.gen_range(-e..=e))
}

fn sign(rng: &mut impl Rng) -> i64 {
    if rng.gen_bool(0.5) {
        1
    } else {
        -1
    }
}

fn nonzero_vector(rng: &mut impl Rng, e: i64) -> Vec2 {
    loop {
        let v = Vec2::new(entry(rng, e), entry(rng, e));
        if !v.is_zero() {
            return v;
        }
    }
}

fn random_word(rng: &mut impl Rng, letters: usize, max_len: usize) -> Vec<usize> {
    if letters == 0 {
        return Vec::new();
    }
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..letters)).collect()
}

/// A matrix question over `gens`; about half are built to be positive.
fn matrix_question(rng: &mut impl Rng, gens: Vec<Mat2>, e: i64, membership_only: bool) -> ProblemInstance {
    let planted = product(&gens, &random_word(rng, gens.len(), 4)).expect("letters in range");
    let perturb = !gens.is_empty() && rng.gen_bool(0.5);
    let kind = if membership_only { 0 } else { rng.gen_range(0..4) };
    match kind {
        0 => {
            let mut target = planted;
            if perturb {
                target.m12 += int(rng.gen_range(1..=e.max(1)));
            }
            ProblemInstance::Membership { generators: gens, target }
        }
        1 => {
            let x = nonzero_vector(rng, e);
            let y = if perturb { nonzero_vector(rng, e) } else { planted.apply(&x) };
            ProblemInstance::VectorReachability { generators: gens, x, y }
        }
        2 => {
            let (x, y) = (nonzero_vector(rng, e), nonzero_vector(rng, e));
            let lambda = if perturb { entry(rng, 2 * e) } else { y.dot(&planted.apply(&x)) };
            ProblemInstance::ScalarReachability { generators: gens, x, y, lambda }
        }
        _ => {
            let x = nonzero_vector(rng, e);
            let y = if perturb {
                nonzero_vector(rng, e)
            } else {
                let v = planted.apply(&x);
                Vec2::new(-v.v2, v.v1)
            };
            ProblemInstance::ZeroReachability { generators: gens, x, y }
        }
    }
}

fn random_matrix_with_det(rng: &mut impl Rng, e: i64, det: i64) -> Mat2 {
    loop {
        let m = Mat2::new(entry(rng, e), entry(rng, e), entry(rng, e), entry(rng, e));
        if m.det() == int(det) && !m.is_zero() {
            return m;
        }
    }
}

fn random_bca(rng: &mut impl Rng, spec: &RandomSpec) -> ProblemInstance {
    let n = rng.gen_range(1..=4usize);
    let bound: i64 = rng.gen_range(0..=4);
    let count = spec.generators.unwrap_or_else(|| rng.gen_range(1..=6));
    let transitions = (0..count)
        .map(|_| BcaTransition {
            from: rng.gen_range(0..n),
            delta: int(rng.gen_range(-bound..=bound)),
            to: rng.gen_range(0..n),
        })
        .collect();
    let machine = Bca { states: (0..n).map(|i| format!("q{i}")).collect(), bound: int(bound), transitions };
    let from = Config::new(rng.gen_range(0..n), rng.gen_range(0..=bound));
    let to = Config::new(rng.gen_range(0..n), rng.gen_range(0..=bound));
    ProblemInstance::BcaReachability { machine, from, to }
}

pub fn random_instance(family: Family, spec: &RandomSpec, rng: &mut impl Rng) -> ProblemInstance {
    let e = spec.entry.max(1);
    let count = spec.generators.unwrap_or_else(|| rng.gen_range(1..=4));
    match family {
        Family::Detpm1 | Family::Detminus1 => {
            let gens = (0..count)
                .map(|_| {
                    let s = sign(rng);
                    let t = if family == Family::Detminus1 { -s } else { sign(rng) };
                    Mat2::new(int(s), entry(rng, e), int(0), int(t))
                })
                .collect();
            matrix_question(rng, gens, e, false)
        }
        Family::Ut => {
            let gens: Vec<Mat2> =
                (0..count).map(|_| Mat2::new(entry(rng, e), entry(rng, e), int(0), entry(rng, e))).collect();
            // vector questions only where the second diagonal never vanishes
            let membership_only = gens.iter().any(|g| g.m22.is_zero()) || rng.gen_bool(0.5);
            match matrix_question(rng, gens, e, true) {
                inst if membership_only => inst,
                ProblemInstance::Membership { generators, target } => {
                    let x = nonzero_vector(rng, e);
                    let y = if rng.gen_bool(0.5) { target.apply(&x) } else { nonzero_vector(rng, e) };
                    ProblemInstance::VectorReachability { generators, x, y }
                }
                _ => unreachable!("membership requested"),
            }
        }
        Family::Mortality => {
            let generators = (0..count)
                .map(|_| {
                    let det = if rng.gen_bool(0.5) { 0 } else { 1 };
                    random_matrix_with_det(rng, e, det)
                })
                .collect();
            ProblemInstance::Mortality { generators }
        }
        Family::Affine => {
            let functions: Vec<AffineMap> =
                (0..count).map(|_| AffineMap::z(entry(rng, e), entry(rng, e))).collect();
            let planted = random_word(rng, functions.len(), 4)
                .iter()
                .try_fold(AffineMap::identity(crate::arith::Domain::Z), |acc, &i| acc.compose(&functions[i]))
                .expect("same domain");
            if rng.gen_bool(0.5) {
                let target = if rng.gen_bool(0.5) { planted } else { AffineMap::z(entry(rng, e), entry(rng, e)) };
                ProblemInstance::AffineMembershipZ { functions, target }
            } else {
                let x = entry(rng, e);
                let y = if rng.gen_bool(0.5) {
                    planted.apply_int(&x).expect("integer map").to_integer()
                } else {
                    entry(rng, 2 * e)
                };
                ProblemInstance::AffineReachabilityZ { functions, x, y }
            }
        }
        Family::Bca => random_bca(rng, spec),
    }
}

/// Exact solvers whose preconditions the family guarantees.
fn solvers_for(family: Family, inst: &ProblemInstance) -> Vec<Solver> {
    match family {
        Family::Detpm1 => {
            let all_minus = inst.generators().is_some_and(|g| !g.is_empty() && g.iter().all(|m| m.det() == int(-1)));
            if all_minus {
                vec![Solver::Detpm1, Solver::Detminus1]
            } else {
                vec![Solver::Detpm1]
            }
        }
        Family::Detminus1 if inst.generators().is_some_and(<[Mat2]>::is_empty) => vec![Solver::Detpm1],
        Family::Detminus1 => vec![Solver::Detminus1, Solver::Detpm1],
        Family::Mortality => vec![Solver::Mortality],
        Family::Ut => match inst {
            ProblemInstance::Membership { .. } => vec![Solver::Utmember],
            _ => vec![Solver::Utvec],
        },
        Family::Affine => vec![Solver::Auto],
        Family::Bca => vec![Solver::Machines],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub index: u64,
    pub solver: String,
    pub solver_verdict: String,
    pub oracle_verdict: String,
    pub instance: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct XcheckReport {
    pub family: String,
    pub seed: u64,
    pub count: u64,
    /// Solver runs compared against a definitive oracle verdict.
    pub compared: u64,
    pub disagreements: Vec<Disagreement>,
    pub oracle_unknown: u64,
    pub solver_unknown: u64,
    /// Exact solver runs that failed (precondition or internal error).
    pub solver_errors: Vec<String>,
    /// Witnesses that did not replay.
    pub witness_failures: Vec<String>,
    /// Orbit nodes that broke content preservation (mortality family).
    pub gcd_violations: u64,
    pub orbit_nodes: u64,
}

impl XcheckReport {
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty() && self.solver_errors.is_empty() && self.witness_failures.is_empty()
    }
}

/// Oracle limits used by the cross-check.
pub fn xcheck_budget() -> Budget {
    Budget::with_magnitude(8, 1_000_000)
}

fn describe(v: &Verdict) -> String {
    match v {
        Verdict::Yes(w) => format!("yes {w:?}"),
        Verdict::No(c) => format!("no ({c:?})"),
        Verdict::Unknown(e) => format!("unknown ({e:?})"),
    }
}

/// Reference answer: the bounded oracle, or exact search for automata.
fn reference(inst: &ProblemInstance, budget: &Budget) -> Result<Verdict> {
    match inst {
        ProblemInstance::BcaReachability { machine, from, to } => reach_bca(machine, from, to),
        other => oracle_solve(other, budget),
    }
}

fn check_one(family: Family, seed: u64, index: u64, spec: &RandomSpec) -> XcheckReport {
    let mut report = XcheckReport::default();
    let inst = random_instance(family, spec, &mut instance_rng(seed, index));
    let budget = xcheck_budget();
    let opts = SolveOptions { budget: budget.clone(), ..SolveOptions::default() };
    let oracle = match reference(&inst, &budget) {
        Ok(v) => v,
        Err(e) => {
            report.solver_errors.push(format!("#{index} oracle: {e}"));
            return report;
        }
    };
    if let Err(e) = verify_verdict(&inst, &oracle) {
        report.witness_failures.push(format!("#{index} oracle: {e}"));
    }
    if !oracle.is_definitive() {
        report.oracle_unknown += 1;
    }
    let mut runs: Vec<(String, Result<Verdict>)> = solvers_for(family, &inst)
        .into_iter()
        .map(|s| (s.name().to_owned(), solve(&inst, s, &opts).map(|r| r.verdict)))
        .collect();
    if family == Family::Bca {
        runs.push(("bca2arm".to_owned(), reduced_bca_verdict(&inst)));
    }
    if let ProblemInstance::Mortality { generators } = &inst {
        if let Ok(r) = solve_mortality_report(generators, &budget) {
            report.gcd_violations += r.gcd_violations as u64;
            report.orbit_nodes += r.orbit_nodes as u64;
        }
    }
    for (name, run) in runs {
        let verdict = match run {
            Ok(v) => v,
            Err(e) => {
                report.solver_errors.push(format!("#{index} {name}: {e}"));
                continue;
            }
        };
        if name != "bca2arm" {
            if let Err(e) = verify_verdict(&inst, &verdict) {
                report.witness_failures.push(format!("#{index} {name}: {e}"));
            }
        }
        if !verdict.is_definitive() {
            report.solver_unknown += 1;
        }
        if let (Some(a), Some(b)) = (verdict.answer(), oracle.answer()) {
            report.compared += 1;
            if a != b {
                report.disagreements.push(Disagreement {
                    index,
                    solver: name,
                    solver_verdict: describe(&verdict),
                    oracle_verdict: describe(&oracle),
                    instance: write_instance(&inst),
                });
            }
        }
    }
    report
}

/// Reachability of the reduced affine register machine, with its witness
/// replayed on that machine.
fn reduced_bca_verdict(inst: &ProblemInstance) -> Result<Verdict> {
    let ProblemInstance::BcaReachability { machine, from, to } = inst else {
        return Err(Error::Precondition("expected a bca instance".into()));
    };
    let red = crate::machines::reduce_bca_to_arm(machine, from, to)?;
    let v = reach_prm(&red.machine, &red.from, &red.to, &red.sufficient_budget());
    let prm_inst =
        ProblemInstance::PrmReachability { machine: red.machine.clone(), from: red.from.clone(), to: red.to.clone() };
    verify_verdict(&prm_inst, &v)?;
    Ok(v)
}

fn merge(mut acc: XcheckReport, part: XcheckReport) -> XcheckReport {
    acc.compared += part.compared;
    acc.disagreements.extend(part.disagreements);
    acc.oracle_unknown += part.oracle_unknown;
    acc.solver_unknown += part.solver_unknown;
    acc.solver_errors.extend(part.solver_errors);
    acc.witness_failures.extend(part.witness_failures);
    acc.gcd_violations += part.gcd_violations;
    acc.orbit_nodes += part.orbit_nodes;
    acc
}

/// Runs `count` seeded instances of `family` in parallel; the report lists
/// findings in instance order and is identical for equal arguments.
pub fn xcheck(family: Family, count: u64, seed: u64, spec: &RandomSpec) -> XcheckReport {
    let parts: Vec<XcheckReport> = (0..count).into_par_iter().map(|i| check_one(family, seed, i, spec)).collect();
    let base = XcheckReport { family: family.name().to_owned(), seed, count, ..XcheckReport::default() };
    parts.into_iter().fold(base, merge)
}

/// Picks a family uniformly; used when no family filter is given.
pub fn any_family(rng: &mut impl Rng) -> Family {
    *Family::ALL.choose(rng).expect("non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn seeded_instances_are_reproducible() {
        for f in Family::ALL {
            let a = random_instance(f, &RandomSpec::default(), &mut instance_rng(7, 3));
            let b = random_instance(f, &RandomSpec::default(), &mut instance_rng(7, 3));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn zero_generators_give_identity_membership() {
        let spec = RandomSpec { generators: Some(0), entry: 3 };
        for i in 0..20 {
            if let ProblemInstance::Membership { target, .. } =
                random_instance(Family::Detpm1, &spec, &mut instance_rng(1, i))
            {
                assert!(target.is_identity());
            }
        }
    }

    #[test]
    fn small_runs_are_clean() {
        for f in Family::ALL {
            let r = xcheck(f, 12, 5, &RandomSpec::default());
            assert!(r.is_clean(), "{r:#?}");
            assert_eq!(r.gcd_violations, 0);
        }
    }

    #[test]
    fn matrix_helpers() {
        let m = random_matrix_with_det(&mut instance_rng(0, 0), 3, 0);
        assert!(m.det().is_zero() && !m.is_zero());
        let one = random_matrix_with_det(&mut instance_rng(0, 1), 3, 1);
        assert!(one.det().is_one());
    }
}
