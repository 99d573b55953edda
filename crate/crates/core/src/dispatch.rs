//! Solver selection and witness replay.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{product, AffineMap, Mat2, UTMat};
use crate::bridge::encode_affine;
use crate::detpm1::{solve_detminus1, solve_detpm1};
use crate::error::{Error, Result};
use crate::instance::{Budget, NoCertificate, ProblemInstance, Verdict, Word};
use crate::machines::{reach_bca, reach_prm, PrmBudget};
use crate::mortality::solve_mortality;
use crate::oracle::oracle_solve;
use crate::utsolvers::{solve_ut_membership, solve_vecreach_ut22, ut_generators, ut_mortality_witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Solver {
    Auto,
    Oracle,
    Detpm1,
    Detminus1,
    Utvec,
    Utmember,
    Mortality,
    Machines,
}

impl Solver {
    pub const ALL: [Solver; 8] = [
        Solver::Auto,
        Solver::Oracle,
        Solver::Detpm1,
        Solver::Detminus1,
        Solver::Utvec,
        Solver::Utmember,
        Solver::Mortality,
        Solver::Machines,
    ];

    /// Order in which `auto` tries the exact solvers.
    const ROUTE: [Solver; 6] =
        [Solver::Detminus1, Solver::Detpm1, Solver::Utmember, Solver::Utvec, Solver::Mortality, Solver::Machines];

    pub fn name(self) -> &'static str {
        match self {
            Solver::Auto => "auto",
            Solver::Oracle => "oracle",
            Solver::Detpm1 => "detpm1",
            Solver::Detminus1 => "detminus1",
            Solver::Utvec => "utvec",
            Solver::Utmember => "utmember",
            Solver::Mortality => "mortality",
            Solver::Machines => "machines",
        }
    }

    pub fn parse(s: &str) -> Result<Solver> {
        Solver::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown solver {s:?}")))
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Limits for the oracle and the orbit searches.
    pub budget: Budget,
    /// Limits for register-machine searches.
    pub prm: PrmBudget,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { budget: Budget::default(), prm: PrmBudget::new(64, Some(BigInt::from(100_000))) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solved {
    pub verdict: Verdict,
    /// The solver that produced the verdict; never `Auto`.
    pub solver: Solver,
}

fn not_applicable(solver: Solver, inst: &ProblemInstance) -> Error {
    Error::Precondition(format!("solver {solver} does not handle {}", inst.tag().name()))
}

fn ut_target(t: &Mat2) -> Result<UTMat> {
    t.to_ut().ok_or_else(|| Error::Precondition(format!("target {t:?} is not upper triangular")))
}

/// Integer affine problems are matrix problems over `(a b; 0 1)` with the same
/// witness words; the exact matrix solvers run on that encoding.
fn matrix_view(inst: &ProblemInstance) -> Result<std::borrow::Cow<'_, ProblemInstance>> {
    use std::borrow::Cow;
    match inst {
        ProblemInstance::AffineMembershipZ { .. } | ProblemInstance::AffineReachabilityZ { .. } => {
            Ok(Cow::Owned(encode_affine(inst)?))
        }
        _ => Ok(Cow::Borrowed(inst)),
    }
}

fn run_exact(solver: Solver, inst: &ProblemInstance, opts: &SolveOptions) -> Result<Verdict> {
    let view = matrix_view(inst)?;
    let inst = view.as_ref();
    match (solver, inst) {
        (Solver::Detminus1, _) => {
            if inst.generators().is_none_or(<[Mat2]>::is_empty) {
                return Err(Error::Precondition("determinant -1 solver needs at least one generator".into()));
            }
            solve_detminus1(inst)
        }
        (Solver::Detpm1, _) => solve_detpm1(inst),
        (Solver::Utmember, ProblemInstance::Membership { generators, target }) => {
            solve_ut_membership(&ut_generators(generators)?, &ut_target(target)?, &opts.prm, &opts.budget)
        }
        (Solver::Utvec, ProblemInstance::VectorReachability { generators, x, y }) => {
            solve_vecreach_ut22(&ut_generators(generators)?, x, y, &opts.prm)
        }
        (Solver::Mortality, ProblemInstance::Mortality { generators }) => match ut_generators(generators) {
            Ok(ut) => Ok(ut_mortality_witness(&ut).map_or(Verdict::No(NoCertificate::Structural), Verdict::Yes)),
            Err(_) => solve_mortality(generators, &opts.budget),
        },
        (Solver::Machines, ProblemInstance::BcaReachability { machine, from, to }) => reach_bca(machine, from, to),
        (Solver::Machines, ProblemInstance::PrmReachability { machine, from, to }) => {
            Ok(reach_prm(machine, from, to, &opts.prm))
        }
        (Solver::Oracle, _) => oracle_solve(inst, &opts.budget),
        _ => Err(not_applicable(solver, inst)),
    }
}

/// Runs the requested solver. `Auto` takes the first exact solver whose
/// preconditions hold, falling back to the oracle.
pub fn solve(inst: &ProblemInstance, solver: Solver, opts: &SolveOptions) -> Result<Solved> {
    if solver != Solver::Auto {
        if solver == Solver::Oracle {
            return Ok(Solved { verdict: oracle_solve(inst, &opts.budget)?, solver });
        }
        return Ok(Solved { verdict: run_exact(solver, inst, opts)?, solver });
    }
    for candidate in Solver::ROUTE {
        match run_exact(candidate, inst, opts) {
            Ok(verdict) => return Ok(Solved { verdict, solver: candidate }),
            Err(Error::Precondition(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(Solved { verdict: oracle_solve(inst, &opts.budget)?, solver: Solver::Oracle })
}

fn mismatch(msg: impl Into<String>) -> Error {
    Error::Replay(msg.into())
}

fn check_letters(word: &Word, alphabet: usize) -> Result<()> {
    match word.iter().position(|&i| i >= alphabet) {
        Some(pos) => Err(mismatch(format!("step {pos}: letter {} out of range (alphabet {alphabet})", word[pos]))),
        None => Ok(()),
    }
}

fn affine_composite(functions: &[AffineMap], word: &Word) -> Result<AffineMap> {
    let domain = functions.first().map_or(crate::arith::Domain::Z, AffineMap::domain);
    word.iter().try_fold(AffineMap::identity(domain), |acc, &i| acc.compose(&functions[i]))
}

/// Replays `word` against `inst`; `Err(Error::Replay)` names the divergence.
pub fn verify(inst: &ProblemInstance, word: &Word) -> Result<()> {
    check_letters(word, inst.alphabet_len())?;
    match inst {
        ProblemInstance::Membership { generators, target } => {
            let m = product(generators, word).expect("letters checked");
            if m != *target {
                return Err(mismatch(format!("product {m:?} differs from target {target:?}")));
            }
        }
        ProblemInstance::VectorReachability { generators, x, y } => {
            let v = product(generators, word).expect("letters checked").apply(x);
            if v != *y {
                return Err(mismatch(format!("image {v:?} differs from {y:?}")));
            }
        }
        ProblemInstance::ScalarReachability { .. } | ProblemInstance::ZeroReachability { .. } => {
            let (generators, x, y, lambda) = inst.as_scalar().expect("scalar tags");
            let value = y.dot(&product(generators, word).expect("letters checked").apply(x));
            if value != lambda {
                return Err(mismatch(format!("scalar {value} differs from {lambda}")));
            }
        }
        ProblemInstance::Mortality { generators } => {
            if word.is_empty() {
                return Err(mismatch("the empty product is the identity"));
            }
            let m = product(generators, word).expect("letters checked");
            if !m.is_zero() {
                return Err(mismatch(format!("product {m:?} is not zero")));
            }
        }
        ProblemInstance::AffineMembershipZ { functions, target } => {
            let f = affine_composite(functions, word)?;
            if f != *target {
                return Err(mismatch(format!("composite {f:?} differs from target {target:?}")));
            }
        }
        ProblemInstance::AffineReachabilityZ { functions, x, y } => {
            let v = affine_composite(functions, word)?.apply_int(x)?;
            if v != BigRational::from_integer(y.clone()) {
                return Err(mismatch(format!("image {v} differs from {y}")));
            }
        }
        ProblemInstance::AffineReachabilityQ { functions, x, y } => {
            let v = affine_composite(functions, word)?.apply(x)?;
            if v != *y {
                return Err(mismatch(format!("image {v} differs from {y}")));
            }
        }
        ProblemInstance::BcaReachability { machine, from, to } => {
            let mut cur = from.clone();
            for (pos, &t) in word.iter().enumerate() {
                cur = machine
                    .step(&cur, t)
                    .ok_or_else(|| mismatch(format!("step {pos}: transition {t} not enabled at {cur:?}")))?;
            }
            if cur != *to {
                return Err(mismatch(format!("run ends at {cur:?}, not {to:?}")));
            }
        }
        ProblemInstance::PrmReachability { machine, from, to } => {
            let mut cur = from.clone();
            for (pos, &t) in word.iter().enumerate() {
                cur = machine
                    .replay(&cur, &[t])
                    .ok_or_else(|| mismatch(format!("step {pos}: transition {t} not enabled at {cur:?}")))?;
            }
            if cur != *to {
                return Err(mismatch(format!("run ends at {cur:?}, not {to:?}")));
            }
        }
    }
    Ok(())
}

/// Checks a verdict's witness when it has one.
pub fn verify_verdict(inst: &ProblemInstance, verdict: &Verdict) -> Result<()> {
    match verdict.witness() {
        Some(w) => verify(inst, w),
        None => Ok(()),
    }
}
