//! Translations between the affine and matrix formulations, the reduction of
//! rational affine reachability to vector reachability, and generators of
//! hard instances from multi-subset-sum.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{int, AffineMap, Domain, Mat2, UTMat, Vec2};
use crate::error::{Error, Result};
use crate::instance::{disjunction, ProblemInstance, Verdict, Word};

fn ut_gens(functions: &[AffineMap]) -> Vec<Mat2> {
    functions.iter().map(|f| f.to_ut().to_mat2()).collect()
}

fn require_domain(functions: &[AffineMap], domain: Domain) -> Result<()> {
    if functions.iter().any(|f| f.domain() != domain) {
        return Err(Error::DomainMismatch);
    }
    Ok(())
}

/// Vector `(p, q)` with `q > 0` representing the rational `p/q`.
fn projective(r: &BigRational) -> Vec2 {
    Vec2::new(r.numer().clone(), r.denom().clone())
}

/// Matrix formulation of an affine instance.
///
/// Z-membership becomes membership over `(a b; 0 1)`, Z-reachability becomes
/// vector reachability between `(x, 1)` and `(y, 1)`, and Q-reachability becomes
/// zero-reachability from `(x1, x2)` with the row `(y2, -y1)`.
pub fn encode_affine(inst: &ProblemInstance) -> Result<ProblemInstance> {
    match inst {
        ProblemInstance::AffineMembershipZ { functions, target } => {
            require_domain(functions, Domain::Z)?;
            require_domain(std::slice::from_ref(target), Domain::Z)?;
            Ok(ProblemInstance::Membership { generators: ut_gens(functions), target: target.to_ut().to_mat2() })
        }
        ProblemInstance::AffineReachabilityZ { functions, x, y } => {
            require_domain(functions, Domain::Z)?;
            Ok(ProblemInstance::VectorReachability {
                generators: ut_gens(functions),
                x: Vec2::new(x.clone(), BigInt::one()),
                y: Vec2::new(y.clone(), BigInt::one()),
            })
        }
        ProblemInstance::AffineReachabilityQ { functions, x, y } => {
            require_domain(functions, Domain::Q)?;
            let yv = projective(y);
            Ok(ProblemInstance::ZeroReachability {
                generators: ut_gens(functions),
                x: projective(x),
                y: Vec2::new(yv.v2, -yv.v1),
            })
        }
        other => Err(Error::Precondition(format!("{} is not an affine problem", other.tag().name()))),
    }
}

fn affine_gens(generators: &[Mat2], domain: Domain) -> Result<Vec<AffineMap>> {
    generators
        .iter()
        .map(|m| {
            let ut = m
                .to_ut()
                .ok_or_else(|| Error::Precondition(format!("{m:?} is not upper triangular")))?;
            AffineMap::from_ut(&ut, domain)
        })
        .collect()
}

/// Inverse of [`encode_affine`]; rejects matrix instances outside its image,
/// including the degenerate vectors with `x2 = 0` or a row with first entry 0.
pub fn decode_affine(inst: &ProblemInstance) -> Result<ProblemInstance> {
    match inst {
        ProblemInstance::Membership { generators, target } => {
            let functions = affine_gens(generators, Domain::Z)?;
            let target = affine_gens(std::slice::from_ref(target), Domain::Z)?.remove(0);
            Ok(ProblemInstance::AffineMembershipZ { functions, target })
        }
        ProblemInstance::VectorReachability { generators, x, y } => {
            if !x.v2.is_one() || !y.v2.is_one() {
                return Err(Error::Precondition("vectors must have bottom entry 1".into()));
            }
            Ok(ProblemInstance::AffineReachabilityZ {
                functions: affine_gens(generators, Domain::Z)?,
                x: x.v1.clone(),
                y: y.v1.clone(),
            })
        }
        ProblemInstance::ZeroReachability { generators, x, y } => {
            if x.v2.is_zero() || y.v1.is_zero() {
                return Err(Error::Precondition(
                    "degenerate vectors: bottom entry of x and first entry of the row must be non-zero".into(),
                ));
            }
            if generators.iter().any(|m| m.m22.is_zero()) {
                return Err(Error::ZeroDenominator);
            }
            Ok(ProblemInstance::AffineReachabilityQ {
                functions: affine_gens(generators, Domain::Q)?,
                x: BigRational::new(x.v1.clone(), x.v2.clone()),
                y: BigRational::new(-y.v2.clone(), y.v1.clone()),
            })
        }
        other => Err(Error::Precondition(format!("{} has no affine counterpart", other.tag().name()))),
    }
}

/// One disjunct of [`reduce_affq_to_vecreach`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubInstance {
    /// Vector reachability to `(0, 0)`; the last generator is the projection `T`.
    pub instance: ProblemInstance,
    /// Original indices of the non-projection generators.
    pub kept: Vec<usize>,
    /// The constant function this disjunct starts from, if any.
    pub start_constant: Option<usize>,
}

impl AffineSubInstance {
    /// Converts a vector-reachability witness into a word over the original functions.
    pub fn affine_witness(&self, word: &Word) -> Word {
        let t = self.kept.len();
        let suffix = match word.iter().rposition(|&i| i == t) {
            Some(p) => &word[p + 1..],
            None => &word[..],
        };
        let mut w: Word = suffix.iter().map(|&i| self.kept[i]).collect();
        w.extend(self.start_constant);
        w
    }
}

/// Turing reduction of Q-affine reachability to vector reachability.
///
/// Constant functions are removed; each one contributes a disjunct starting at
/// its value. Every disjunct appends `T = (y2 -y1; 0 0)` and targets the zero
/// vector: the non-constant generators are invertible, so the orbit meets zero
/// exactly when `T` is applied on the line through `(y1, y2)`.
pub fn reduce_affq_to_vecreach(inst: &ProblemInstance) -> Result<Vec<AffineSubInstance>> {
    let ProblemInstance::AffineReachabilityQ { functions, x, y } = inst else {
        return Err(Error::Precondition("expected affine-reachability-q".into()));
    };
    require_domain(functions, Domain::Q)?;
    let yv = projective(y);
    let t = Mat2::new(yv.v2.clone(), -yv.v1.clone(), BigInt::zero(), BigInt::zero());
    let kept: Vec<usize> = (0..functions.len()).filter(|&i| !functions[i].is_constant()).collect();
    let mut generators: Vec<Mat2> = kept.iter().map(|&i| functions[i].to_ut().to_mat2()).collect();
    generators.push(t);

    let sub = |start: Vec2, start_constant| AffineSubInstance {
        instance: ProblemInstance::VectorReachability { generators: generators.clone(), x: start, y: Vec2::from_i64(0, 0) },
        kept: kept.clone(),
        start_constant,
    };
    let mut out = vec![sub(projective(x), None)];
    for (i, f) in functions.iter().enumerate().filter(|(_, f)| f.is_constant()) {
        out.push(sub(Vec2::new(f.b().clone(), f.c().clone()), Some(i)));
    }
    Ok(out)
}

/// Combines the verdicts of the disjuncts, translating a witness back.
pub fn combine_affq(subs: &[AffineSubInstance], verdicts: Vec<Verdict>) -> Verdict {
    disjunction(subs.iter().zip(verdicts).map(|(s, v)| v.map_witness(|w| s.affine_witness(&w))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HardVariant {
    Membership,
    Vector,
    ZeroReach,
    DetMinusOne,
    Mortality,
}

impl HardVariant {
    pub const ALL: [HardVariant; 5] = [
        HardVariant::Membership,
        HardVariant::Vector,
        HardVariant::ZeroReach,
        HardVariant::DetMinusOne,
        HardVariant::Mortality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HardVariant::Membership => "membership",
            HardVariant::Vector => "vector",
            HardVariant::ZeroReach => "zero-reach",
            HardVariant::DetMinusOne => "det-minus-one",
            HardVariant::Mortality => "mortality",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        HardVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown variant {s:?}")))
    }
}

/// Matrix instance that is positive iff `t = Σ α_i a_i` for some `α ∈ N^k`.
pub fn gen_hard(a: &[BigInt], t: &BigInt, variant: HardVariant) -> ProblemInstance {
    let shears = || -> Vec<Mat2> { a.iter().map(|ai| UTMat::new(int(1), ai.clone(), int(1)).to_mat2()).collect() };
    let shear_t = UTMat::new(int(1), t.clone(), int(1)).to_mat2();
    match variant {
        HardVariant::Membership => ProblemInstance::Membership { generators: shears(), target: shear_t },
        HardVariant::Vector => ProblemInstance::VectorReachability {
            generators: shears(),
            x: Vec2::from_i64(0, 1),
            y: Vec2::new(t.clone(), int(1)),
        },
        HardVariant::ZeroReach => ProblemInstance::ZeroReachability {
            generators: shears(),
            x: Vec2::from_i64(0, 1),
            y: Vec2::new(int(1), -t.clone()),
        },
        HardVariant::DetMinusOne => {
            let mut generators: Vec<Mat2> =
                a.iter().map(|ai| UTMat::new(int(-1), -ai.clone(), int(-1)).to_mat2()).collect();
            generators.push(Mat2::from_i64([[-1, 0], [0, -1]]));
            ProblemInstance::Membership { generators, target: shear_t }
        }
        HardVariant::Mortality => {
            let mut generators = shears();
            generators.push(Mat2::new(int(0), int(0), int(1), -t.clone()));
            ProblemInstance::Mortality { generators }
        }
    }
}

/// Dynamic-programming answer to multi-subset-sum (unbounded multiplicities).
pub fn multi_subset_sum(a: &[BigInt], t: &BigInt) -> Result<bool> {
    if t.is_negative() || a.iter().any(Signed::is_negative) {
        return Err(Error::Precondition("multi-subset-sum expects non-negative integers".into()));
    }
    let t: usize = t
        .try_into()
        .map_err(|_| Error::Precondition("target too large for the table".into()))?;
    let mut reach = vec![false; t + 1];
    reach[0] = true;
    for s in 1..=t {
        reach[s] = a.iter().any(|ai| {
            usize::try_from(ai).is_ok_and(|ai| ai >= 1 && ai <= s && reach[s - ai])
        });
    }
    Ok(reach[t])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::product;
    use crate::instance::Budget;
    use crate::oracle::{oracle_solve, vector_reachability};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(int(n), int(d))
    }

    #[test]
    fn encode_examples() {
        let inst = ProblemInstance::AffineMembershipZ {
            functions: vec![AffineMap::z_i64(2, 1)],
            target: AffineMap::z_i64(4, 3),
        };
        let enc = encode_affine(&inst).unwrap();
        assert_eq!(
            enc,
            ProblemInstance::Membership {
                generators: vec![Mat2::from_i64([[2, 1], [0, 1]])],
                target: Mat2::from_i64([[4, 3], [0, 1]]),
            }
        );
        assert_eq!(oracle_solve(&enc, &Budget::new(4)).unwrap(), Verdict::Yes(vec![0, 0]));
        assert_eq!(decode_affine(&enc).unwrap(), inst);

        let inst = ProblemInstance::AffineReachabilityZ { functions: vec![], x: int(4), y: int(4) };
        let enc = encode_affine(&inst).unwrap();
        assert_eq!(oracle_solve(&enc, &Budget::new(1)).unwrap(), Verdict::Yes(vec![]));

        let inst = ProblemInstance::AffineReachabilityQ {
            functions: vec![AffineMap::q_i64(1, 0, 2).unwrap()],
            x: q(1, 1),
            y: q(1, 4),
        };
        let enc = encode_affine(&inst).unwrap();
        assert_eq!(
            enc,
            ProblemInstance::ZeroReachability {
                generators: vec![Mat2::from_i64([[1, 0], [0, 2]])],
                x: Vec2::from_i64(1, 1),
                y: Vec2::from_i64(4, -1),
            }
        );
        assert!(oracle_solve(&enc, &Budget::new(4)).unwrap().is_yes());
        assert_eq!(decode_affine(&enc).unwrap(), inst);
    }

    #[test]
    fn decode_rejects_degenerate_vectors() {
        let bad = ProblemInstance::ZeroReachability {
            generators: vec![Mat2::from_i64([[1, 0], [0, 2]])],
            x: Vec2::from_i64(1, 0),
            y: Vec2::from_i64(4, -1),
        };
        assert!(decode_affine(&bad).is_err());
        let bad = ProblemInstance::ZeroReachability {
            generators: vec![Mat2::from_i64([[1, 0], [0, 0]])],
            x: Vec2::from_i64(1, 1),
            y: Vec2::from_i64(4, -1),
        };
        assert_eq!(decode_affine(&bad), Err(Error::ZeroDenominator));
    }

    fn solve_subs(subs: &[AffineSubInstance], len: usize) -> Verdict {
        let verdicts = subs.iter().map(|s| oracle_solve(&s.instance, &Budget::with_magnitude(len, 1000)).unwrap()).collect();
        combine_affq(subs, verdicts)
    }

    #[test]
    fn affq_reduction_examples() {
        let functions = vec![AffineMap::q_i64(1, 0, 2).unwrap()];
        let inst = ProblemInstance::AffineReachabilityQ { functions: functions.clone(), x: q(1, 1), y: q(1, 4) };
        let subs = reduce_affq_to_vecreach(&inst).unwrap();
        assert_eq!(subs.len(), 1);
        let ProblemInstance::VectorReachability { generators, x, y } = &subs[0].instance else { panic!() };
        assert_eq!(generators, &vec![Mat2::from_i64([[1, 0], [0, 2]]), Mat2::from_i64([[4, -1], [0, 0]])]);
        let v = vector_reachability(generators, x, y, &Budget::new(4));
        assert_eq!(v, Verdict::Yes(vec![1, 0, 0]));
        assert_eq!(solve_subs(&subs, 4), Verdict::Yes(vec![0, 0]));

        let functions = vec![AffineMap::q_i64(0, 3, 1).unwrap(), AffineMap::q_i64(1, 1, 1).unwrap()];
        let inst = ProblemInstance::AffineReachabilityQ { functions, x: q(0, 1), y: q(5, 1) };
        let subs = reduce_affq_to_vecreach(&inst).unwrap();
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[1].instance, {
            let ProblemInstance::VectorReachability { generators, .. } = &subs[0].instance else { panic!() };
            ProblemInstance::VectorReachability { generators: generators.clone(), x: Vec2::from_i64(3, 1), y: Vec2::from_i64(0, 0) }
        });
        let v = solve_subs(&subs, 8);
        assert!(v.is_yes());
        let w = v.witness().unwrap();
        assert_eq!(w, &vec![1, 1, 1, 1, 1]);

        let inst = ProblemInstance::AffineReachabilityQ {
            functions: vec![AffineMap::q_i64(1, 1, 1).unwrap()],
            x: q(0, 1),
            y: q(-1, 1),
        };
        let subs = reduce_affq_to_vecreach(&inst).unwrap();
        assert_eq!(subs.len(), 1);
        for len in [2, 5, 9] {
            assert!(!solve_subs(&subs, len).is_yes());
        }
    }

    #[test]
    fn constant_witness_mapping() {
        let functions = vec![AffineMap::q_i64(0, 3, 1).unwrap(), AffineMap::q_i64(1, 1, 1).unwrap()];
        let inst = ProblemInstance::AffineReachabilityQ { functions: functions.clone(), x: q(10, 1), y: q(4, 1) };
        let subs = reduce_affq_to_vecreach(&inst).unwrap();
        let v = solve_subs(&subs, 6);
        let w = v.witness().unwrap().clone();
        assert_eq!(w, vec![1, 0]);
        let mut value = q(10, 1);
        for &i in w.iter().rev() {
            value = functions[i].apply(&value).unwrap();
        }
        assert_eq!(value, q(4, 1));
    }

    #[test]
    fn gen_hard_examples() {
        let a = [int(3), int(5)];
        let ProblemInstance::Membership { generators, target } = gen_hard(&a, &int(11), HardVariant::Membership) else {
            panic!()
        };
        assert_eq!(generators, vec![Mat2::from_i64([[1, 3], [0, 1]]), Mat2::from_i64([[1, 5], [0, 1]])]);
        assert_eq!(target, Mat2::from_i64([[1, 11], [0, 1]]));
        assert_eq!(product(&generators, &[0, 0, 1]).unwrap(), target);

        let ProblemInstance::Membership { generators, .. } = gen_hard(&a, &int(11), HardVariant::DetMinusOne) else {
            panic!()
        };
        assert_eq!(
            generators,
            vec![
                Mat2::from_i64([[-1, -3], [0, -1]]),
                Mat2::from_i64([[-1, -5], [0, -1]]),
                Mat2::from_i64([[-1, 0], [0, -1]]),
            ]
        );
        let ProblemInstance::Mortality { generators } = gen_hard(&a, &int(11), HardVariant::Mortality) else { panic!() };
        assert_eq!(generators[2], Mat2::from_i64([[0, 0], [1, -11]]));
        assert!(product(&generators, &[2, 0, 0, 1, 2]).unwrap().is_zero());

        for variant in HardVariant::ALL {
            let v = oracle_solve(&gen_hard(&a, &int(11), variant), &Budget::with_magnitude(13, 10_000)).unwrap();
            assert!(v.is_yes(), "{variant:?}");
            let v = oracle_solve(&gen_hard(&a, &int(0), variant), &Budget::new(2)).unwrap();
            assert!(v.is_yes(), "{variant:?} with t = 0");
        }
    }

    #[test]
    fn subset_sum_dp() {
        let a = [int(3), int(5)];
        let yes: Vec<i64> = (0..=12).filter(|&t| multi_subset_sum(&a, &int(t)).unwrap()).collect();
        assert_eq!(yes, vec![0, 3, 5, 6, 8, 9, 10, 11, 12]);
        assert!(!multi_subset_sum(&[int(0)], &int(1)).unwrap());
        assert!(multi_subset_sum(&[], &int(0)).unwrap());
    }
}
