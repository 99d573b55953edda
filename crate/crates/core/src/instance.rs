//! Problem envelopes and the three-valued answer every procedure returns.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{AffineMap, Mat2, Vec2};
use crate::error::{Error, Result};
use crate::machines::{Bca, Prm};

/// Generator indices `[i1, …, ik]` denoting the product `G_i1 · … · G_ik`.
/// For vector-valued problems `G_ik` is applied to `x` first; for affine
/// problems the same word denotes `f_i1 ∘ … ∘ f_ik`. For machine problems the
/// word lists transition indices in firing order.
pub type Word = Vec<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoCertificate {
    /// The explored reachable set closed up without hitting the target.
    Saturation,
    /// Decided from the shape of the instance (divisibility, diagonal signs, linear algebra).
    Structural,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exhaustion {
    /// Product length / step bound reached with a non-empty frontier.
    Length,
    /// Entries above the magnitude cap were discarded.
    Magnitude,
    /// A sub-procedure returned unknown.
    Subcall,
    /// A bounded lattice search hit its box bound.
    SearchBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W = Word> {
    Yes(W),
    No(NoCertificate),
    Unknown(Exhaustion),
}

impl<W> Verdict<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn is_definitive(&self) -> bool {
        !matches!(self, Verdict::Unknown(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn map_witness<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Yes(w) => Verdict::Yes(f(w)),
            Verdict::No(c) => Verdict::No(c),
            Verdict::Unknown(e) => Verdict::Unknown(e),
        }
    }

    /// `Some(true/false)` for definitive answers.
    pub fn answer(&self) -> Option<bool> {
        match self {
            Verdict::Yes(_) => Some(true),
            Verdict::No(_) => Some(false),
            Verdict::Unknown(_) => None,
        }
    }
}

/// Combines the verdicts of a disjunction of sub-problems: any yes wins,
/// no only when every branch is a definitive no.
pub fn disjunction<W>(verdicts: impl IntoIterator<Item = Verdict<W>>) -> Verdict<W> {
    let mut unknown = None;
    let mut saw_saturation = false;
    for v in verdicts {
        match v {
            Verdict::Yes(w) => return Verdict::Yes(w),
            Verdict::No(NoCertificate::Saturation) => saw_saturation = true,
            Verdict::No(NoCertificate::Structural) => {}
            Verdict::Unknown(e) => unknown = unknown.or(Some(e)),
        }
    }
    match unknown {
        Some(_) => Verdict::Unknown(Exhaustion::Subcall),
        None if saw_saturation => Verdict::No(NoCertificate::Saturation),
        None => Verdict::No(NoCertificate::Structural),
    }
}

/// Search limits for the brute-force procedures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Maximal product length (or machine steps).
    pub max_len: usize,
    /// Nodes with an entry of larger absolute value are discarded.
    pub max_magnitude: Option<BigInt>,
}

impl Budget {
    pub fn new(max_len: usize) -> Self {
        Budget { max_len, max_magnitude: None }
    }

    pub fn with_magnitude(max_len: usize, cap: impl Into<BigInt>) -> Self {
        Budget { max_len, max_magnitude: Some(cap.into()) }
    }

    pub fn admits(&self, magnitude: &BigInt) -> bool {
        self.max_magnitude.as_ref().is_none_or(|cap| magnitude <= cap)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_len: 12, max_magnitude: Some(BigInt::from(1_000_000)) }
    }
}

/// A machine configuration `(state index, register/counter value)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Config {
    pub state: usize,
    pub value: BigInt,
}

impl Config {
    pub fn new(state: usize, value: impl Into<BigInt>) -> Self {
        Config { state, value: value.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemTag {
    AffineMembershipZ,
    AffineReachabilityZ,
    AffineReachabilityQ,
    MatrixMembership,
    VectorReachability,
    ScalarReachability,
    ZeroReachability,
    Mortality,
    BcaReachability,
    PrmReachability,
}

impl ProblemTag {
    pub const ALL: [ProblemTag; 10] = [
        ProblemTag::AffineMembershipZ,
        ProblemTag::AffineReachabilityZ,
        ProblemTag::AffineReachabilityQ,
        ProblemTag::MatrixMembership,
        ProblemTag::VectorReachability,
        ProblemTag::ScalarReachability,
        ProblemTag::ZeroReachability,
        ProblemTag::Mortality,
        ProblemTag::BcaReachability,
        ProblemTag::PrmReachability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemTag::AffineMembershipZ => "affine-membership-z",
            ProblemTag::AffineReachabilityZ => "affine-reachability-z",
            ProblemTag::AffineReachabilityQ => "affine-reachability-q",
            ProblemTag::MatrixMembership => "matrix-membership",
            ProblemTag::VectorReachability => "vector-reachability",
            ProblemTag::ScalarReachability => "scalar-reachability",
            ProblemTag::ZeroReachability => "zero-reachability",
            ProblemTag::Mortality => "mortality",
            ProblemTag::BcaReachability => "bca-reachability",
            ProblemTag::PrmReachability => "prm-reachability",
        }
    }

    pub fn parse(s: &str) -> Result<ProblemTag> {
        ProblemTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown problem tag {s:?}")))
    }
}

/// A tagged problem. Each variant carries exactly the fields its problem needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemInstance {
    AffineMembershipZ { functions: Vec<AffineMap>, target: AffineMap },
    AffineReachabilityZ { functions: Vec<AffineMap>, x: BigInt, y: BigInt },
    AffineReachabilityQ { functions: Vec<AffineMap>, x: BigRational, y: BigRational },
    /// Is `target ∈ ⟨generators⟩`?
    Membership { generators: Vec<Mat2>, target: Mat2 },
    /// Is `M·x = y` for some `M ∈ ⟨generators⟩`?
    VectorReachability { generators: Vec<Mat2>, x: Vec2, y: Vec2 },
    /// Is `yᵀ·M·x = lambda` for some `M ∈ ⟨generators⟩`?
    ScalarReachability { generators: Vec<Mat2>, x: Vec2, y: Vec2, lambda: BigInt },
    /// Scalar reachability with `lambda = 0`.
    ZeroReachability { generators: Vec<Mat2>, x: Vec2, y: Vec2 },
    /// Is the zero matrix in `⟨generators⟩`?
    Mortality { generators: Vec<Mat2> },
    BcaReachability { machine: Bca, from: Config, to: Config },
    PrmReachability { machine: Prm, from: Config, to: Config },
}

impl ProblemInstance {
    pub fn tag(&self) -> ProblemTag {
        match self {
            ProblemInstance::AffineMembershipZ { .. } => ProblemTag::AffineMembershipZ,
            ProblemInstance::AffineReachabilityZ { .. } => ProblemTag::AffineReachabilityZ,
            ProblemInstance::AffineReachabilityQ { .. } => ProblemTag::AffineReachabilityQ,
            ProblemInstance::Membership { .. } => ProblemTag::MatrixMembership,
            ProblemInstance::VectorReachability { .. } => ProblemTag::VectorReachability,
            ProblemInstance::ScalarReachability { .. } => ProblemTag::ScalarReachability,
            ProblemInstance::ZeroReachability { .. } => ProblemTag::ZeroReachability,
            ProblemInstance::Mortality { .. } => ProblemTag::Mortality,
            ProblemInstance::BcaReachability { .. } => ProblemTag::BcaReachability,
            ProblemInstance::PrmReachability { .. } => ProblemTag::PrmReachability,
        }
    }

    /// Matrix generators of the matrix-valued problems.
    pub fn generators(&self) -> Option<&[Mat2]> {
        match self {
            ProblemInstance::Membership { generators, .. }
            | ProblemInstance::VectorReachability { generators, .. }
            | ProblemInstance::ScalarReachability { generators, .. }
            | ProblemInstance::ZeroReachability { generators, .. }
            | ProblemInstance::Mortality { generators } => Some(generators),
            _ => None,
        }
    }

    /// Number of letters a witness word may use.
    pub fn alphabet_len(&self) -> usize {
        match self {
            ProblemInstance::AffineMembershipZ { functions, .. }
            | ProblemInstance::AffineReachabilityZ { functions, .. }
            | ProblemInstance::AffineReachabilityQ { functions, .. } => functions.len(),
            ProblemInstance::BcaReachability { machine, .. } => machine.transitions.len(),
            ProblemInstance::PrmReachability { machine, .. } => machine.transitions.len(),
            other => other.generators().map_or(0, <[Mat2]>::len),
        }
    }

    /// Scalar reachability view: `(generators, x, y, lambda)` for both scalar tags.
    pub fn as_scalar(&self) -> Option<(&[Mat2], &Vec2, &Vec2, BigInt)> {
        match self {
            ProblemInstance::ScalarReachability { generators, x, y, lambda } => {
                Some((generators, x, y, lambda.clone()))
            }
            ProblemInstance::ZeroReachability { generators, x, y } => Some((generators, x, y, BigInt::zero())),
            _ => None,
        }
    }
}
