//! Mortality for 2×2 integer generators with determinants in {0, 1}.
//!
//! A shortest zero product has the form `M1·M·Mn` with `M1`, `Mn` singular
//! and `M` a product of determinant-1 generators. Writing `Mn = x·cᵀ` and
//! `M1 = w·rᵀ` with `x`, `r` primitive, the product vanishes iff `rᵀ·M·x = 0`,
//! i.e. iff `M·x = ±(-r2, r1)` since `M·x` is primitive again.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{ext_gcd, primitive, Mat2, Vec2};
use crate::error::{Error, Result};
use crate::instance::{disjunction, Budget, Exhaustion, NoCertificate, Verdict, Word};
use crate::search::{canonical_bfs, Extend, Outcome};

/// `B`, `C` of determinant 1 with `C·x = e1` and `B·e1 = y`; then
/// `M·x = y` for `M` of determinant 1 iff `M = B·(1 1; 0 1)^k·C` for some `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerBasis {
    pub b: Mat2,
    pub c: Mat2,
}

impl StabilizerBasis {
    /// The determinant-1 matrix `B·(1 k; 0 1)·C`, which sends `x` to `y`.
    pub fn member(&self, k: &BigInt) -> Mat2 {
        let t = Mat2::new(BigInt::one(), k.clone(), BigInt::zero(), BigInt::one());
        &(&self.b * &t) * &self.c
    }
}

fn require_primitive(v: &Vec2) -> Result<()> {
    if !v.content().is_one() {
        return Err(Error::Precondition(format!("vector {v:?} is not primitive")));
    }
    Ok(())
}

pub fn stabilizer_basis(x: &Vec2, y: &Vec2) -> Result<StabilizerBasis> {
    require_primitive(x)?;
    require_primitive(y)?;
    let (_, u, v) = ext_gcd(&x.v1, &x.v2);
    let c = Mat2::new(u, v, -x.v2.clone(), x.v1.clone());
    let (_, u2, v2) = ext_gcd(&y.v1, &y.v2);
    let b = Mat2::new(y.v1.clone(), -v2, y.v2.clone(), u2);
    Ok(StabilizerBasis { b, c })
}

/// Outcome of [`solve_mortality_report`], with search statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MortalityReport {
    pub verdict: Verdict,
    /// Orbit vectors examined over all endpoint pairs.
    pub orbit_nodes: usize,
    /// Orbit vectors whose content differed from the start's.
    pub gcd_violations: usize,
}

pub fn solve_mortality(gens: &[Mat2], budget: &Budget) -> Result<Verdict> {
    Ok(solve_mortality_report(gens, budget)?.verdict)
}

pub fn solve_mortality_report(gens: &[Mat2], budget: &Budget) -> Result<MortalityReport> {
    for m in gens {
        let d = m.det();
        if !d.is_zero() && !d.is_one() {
            return Err(Error::Precondition(format!("generator {m:?} has determinant {d}")));
        }
    }
    let mut report = MortalityReport { verdict: Verdict::No(NoCertificate::Structural), orbit_nodes: 0, gcd_violations: 0 };
    if let Some(i) = gens.iter().position(Mat2::is_zero) {
        report.verdict = Verdict::Yes(vec![i]);
        return Ok(report);
    }
    let singular: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].det().is_zero()).collect();
    if singular.is_empty() {
        return Ok(report);
    }
    let sl: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].det().is_one()).collect();
    let sl_mats: Vec<Mat2> = sl.iter().map(|&i| gens[i].clone()).collect();

    let mut verdicts = Vec::new();
    for &first in &singular {
        for &last in &singular {
            let v = pair_search(&gens[first], &gens[last], &sl_mats, budget, &mut report);
            let v = v.map_witness(|w| {
                let mut full = vec![first];
                full.extend(w.into_iter().map(|i| sl[i]));
                full.push(last);
                full
            });
            let yes = v.is_yes();
            verdicts.push(v);
            if yes {
                break;
            }
        }
        if verdicts.last().is_some_and(Verdict::is_yes) {
            break;
        }
    }
    report.verdict = disjunction(verdicts);
    Ok(report)
}

/// Searches `M ∈ ⟨sl⟩` with `first·M·last = 0`.
fn pair_search(first: &Mat2, last: &Mat2, sl: &[Mat2], budget: &Budget, report: &mut MortalityReport) -> Verdict {
    let column = if !last.column(0).is_zero() { last.column(0) } else { last.column(1) };
    let row = if !first.row(0).is_zero() { first.row(0) } else { first.row(1) };
    let (x, _) = primitive(&column).expect("nonzero column of a nonzero matrix");
    let (r, _) = primitive(&row).expect("nonzero row of a nonzero matrix");
    let y = Vec2::new(-r.v2.clone(), r.v1.clone());
    let neg_y = y.neg();
    let content = x.content();
    let mut violations = 0usize;
    let (outcome, stats) = canonical_bfs(
        x,
        sl.len(),
        Extend::Prepend,
        budget.max_len,
        |v, i| Some(sl[i].apply(v)),
        |v| budget.admits(&v.max_abs()),
        |v| {
            if v.content() != content {
                violations += 1;
            }
            *v == y || *v == neg_y
        },
    );
    report.orbit_nodes += stats.visited;
    report.gcd_violations += violations;
    match outcome {
        Outcome::Found { word, .. } => Verdict::Yes(word),
        Outcome::Saturated => Verdict::No(NoCertificate::Saturation),
        Outcome::Truncated => Verdict::Unknown(Exhaustion::Magnitude),
        Outcome::DepthExhausted => Verdict::Unknown(Exhaustion::Length),
    }
}

/// Replays a mortality witness.
pub fn is_mortal_word(gens: &[Mat2], word: &Word) -> bool {
    crate::arith::product(gens, word).is_some_and(|m| m.is_zero())
}
