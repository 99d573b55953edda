//! Brute-force semigroup exploration. This is the ground truth the exact
//! solvers are checked against, so it uses no theory beyond the definitions:
//! products are enumerated breadth-first and deduplicated by value.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::{AffineMap, Domain, Mat2, Vec2};
use crate::error::{Error, Result};
use crate::instance::{Budget, Exhaustion, NoCertificate, ProblemInstance, Verdict};
use crate::search::{canonical_bfs, Extend, Outcome};

fn verdict_of<N>(outcome: Outcome<N>) -> Verdict {
    match outcome {
        Outcome::Found { word, .. } => Verdict::Yes(word),
        Outcome::Saturated => Verdict::No(NoCertificate::Saturation),
        Outcome::Truncated => Verdict::Unknown(Exhaustion::Magnitude),
        Outcome::DepthExhausted => Verdict::Unknown(Exhaustion::Length),
    }
}

/// Searches the matrix products for one satisfying `accept`.
pub fn search_products(gens: &[Mat2], budget: &Budget, accept: impl FnMut(&Mat2) -> bool) -> Verdict {
    let (outcome, _) = canonical_bfs(
        Mat2::identity(),
        gens.len(),
        Extend::Append,
        budget.max_len,
        |m, i| Some(m * &gens[i]),
        |m| budget.admits(&m.max_abs()),
        accept,
    );
    verdict_of(outcome)
}

/// Searches the orbit `{M·x}` for a vector satisfying `accept`.
pub fn search_orbit(gens: &[Mat2], x: &Vec2, budget: &Budget, accept: impl FnMut(&Vec2) -> bool) -> Verdict {
    let (outcome, _) = canonical_bfs(
        x.clone(),
        gens.len(),
        Extend::Prepend,
        budget.max_len,
        |v, i| Some(gens[i].apply(v)),
        |v| budget.admits(&v.max_abs()),
        accept,
    );
    verdict_of(outcome)
}

pub fn membership(gens: &[Mat2], target: &Mat2, budget: &Budget) -> Verdict {
    search_products(gens, budget, |m| m == target)
}

pub fn vector_reachability(gens: &[Mat2], x: &Vec2, y: &Vec2, budget: &Budget) -> Verdict {
    search_orbit(gens, x, budget, |v| v == y)
}

/// `yᵀ·M·x = lambda`; deduplicates on the vectors `M·x`.
pub fn scalar_reachability(gens: &[Mat2], x: &Vec2, y: &Vec2, lambda: &num_bigint::BigInt, budget: &Budget) -> Verdict {
    search_orbit(gens, x, budget, |v| &y.dot(v) == lambda)
}

pub fn mortality(gens: &[Mat2], budget: &Budget) -> Verdict {
    search_products(gens, budget, Mat2::is_zero)
}

/// Searches compositions `f_i1 ∘ … ∘ f_ik` for `target`.
pub fn affine_membership(functions: &[AffineMap], target: &AffineMap, budget: &Budget) -> Result<Verdict> {
    let domain = target.domain();
    if functions.iter().any(|f| f.domain() != domain) {
        return Err(Error::DomainMismatch);
    }
    let (outcome, _) = canonical_bfs(
        AffineMap::identity(domain),
        functions.len(),
        Extend::Append,
        budget.max_len,
        |g, i| g.compose(&functions[i]).ok(),
        |g| budget.admits(&g.a().abs().max(g.b().abs()).max(g.c().abs())),
        |g| g == target,
    );
    Ok(verdict_of(outcome))
}

/// Searches the orbit of `x` under the functions for `y`.
pub fn affine_reachability(functions: &[AffineMap], x: &BigRational, y: &BigRational, budget: &Budget) -> Result<Verdict> {
    if functions.iter().any(|f| f.domain() == Domain::Z) && !(x.is_integer() && y.is_integer()) {
        return Err(Error::NotIntegral(format!("{x} or {y}")));
    }
    let (outcome, _) = canonical_bfs(
        x.clone(),
        functions.len(),
        Extend::Prepend,
        budget.max_len,
        |v, i| functions[i].apply(v).ok(),
        |v| budget.admits(&v.numer().abs().max(v.denom().abs())),
        |v| v == y,
    );
    Ok(verdict_of(outcome))
}

/// Ground-truth verdict for the matrix and affine problems.
pub fn oracle_solve(inst: &ProblemInstance, budget: &Budget) -> Result<Verdict> {
    if budget.max_len == 0 {
        return Err(Error::Precondition("budget length must be positive".into()));
    }
    match inst {
        ProblemInstance::Membership { generators, target } => Ok(membership(generators, target, budget)),
        ProblemInstance::VectorReachability { generators, x, y } => Ok(vector_reachability(generators, x, y, budget)),
        ProblemInstance::ScalarReachability { generators, x, y, lambda } => {
            Ok(scalar_reachability(generators, x, y, lambda, budget))
        }
        ProblemInstance::ZeroReachability { generators, x, y } => {
            Ok(scalar_reachability(generators, x, y, &Zero::zero(), budget))
        }
        ProblemInstance::Mortality { generators } => Ok(mortality(generators, budget)),
        ProblemInstance::AffineMembershipZ { functions, target } => affine_membership(functions, target, budget),
        ProblemInstance::AffineReachabilityZ { functions, x, y } => affine_reachability(
            functions,
            &BigRational::from_integer(x.clone()),
            &BigRational::from_integer(y.clone()),
            budget,
        ),
        ProblemInstance::AffineReachabilityQ { functions, x, y } => affine_reachability(functions, x, y, budget),
        other => Err(Error::Malformed(format!(
            "the oracle handles matrix and affine problems only, got {}",
            other.tag().name()
        ))),
    }
}
