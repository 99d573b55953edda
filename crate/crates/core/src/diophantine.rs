//! Exact integer linear algebra: Hermite normal form, linear systems over Z
//! with sign and parity side constraints, and one-dimensional semilinear sets.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{exact_div, ext_gcd, gcd};
use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<BigInt>>;

fn identity_matrix(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Replaces rows `(p, i)` by `(u·p + v·i, s·p + t·i)`.
fn combine_rows(m: &mut IntMatrix, p: usize, i: usize, (u, v, s, t): (&BigInt, &BigInt, &BigInt, &BigInt)) {
    for c in 0..m[p].len() {
        let (x, y) = (m[p][c].clone(), m[i][c].clone());
        m[p][c] = u * &x + v * &y;
        m[i][c] = s * &x + t * &y;
    }
}

/// Row Hermite normal form: returns `(H, U)` with `H = U·A`, `U` unimodular,
/// `H` in echelon form with positive pivots and entries above each pivot
/// reduced into `[0, pivot)`.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut h = a.clone();
    let mut u = identity_matrix(rows);
    let mut pivot_row = 0;
    for c in 0..cols {
        if pivot_row == rows {
            break;
        }
        for i in pivot_row + 1..rows {
            if h[i][c].is_zero() {
                continue;
            }
            let (x, y) = (h[pivot_row][c].clone(), h[i][c].clone());
            let (g, s, t) = ext_gcd(&x, &y);
            let coeffs = (&s, &t, &(-(&y / &g)), &(&x / &g));
            combine_rows(&mut h, pivot_row, i, coeffs);
            combine_rows(&mut u, pivot_row, i, coeffs);
        }
        if h[pivot_row][c].is_zero() {
            continue;
        }
        if h[pivot_row][c].is_negative() {
            for row in [&mut h[pivot_row], &mut u[pivot_row]] {
                row.iter_mut().for_each(|x| *x = -x.clone());
            }
        }
        let pivot = h[pivot_row][c].clone();
        for i in 0..pivot_row {
            let q = h[i][c].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            for m in [&mut h, &mut u] {
                let prow = m[pivot_row].clone();
                m[i].iter_mut().zip(prow).for_each(|(x, p)| *x -= &q * p);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Determinant by fraction-free elimination (Bareiss).
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Free,
    Nonneg,
}

/// `Σ_{i ∈ vars} x_i ≡ residue (mod 2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parity {
    pub vars: Vec<usize>,
    pub residue: u8,
}

/// `rows · x = rhs` with per-variable sign flags and parity side constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub rows: IntMatrix,
    pub rhs: Vec<BigInt>,
    pub kinds: Vec<VarKind>,
    pub parity: Vec<Parity>,
}

/// Every solution of an all-free system is `particular + Σ λ_i basis_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralSolution {
    pub particular: Vec<BigInt>,
    pub basis: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearOutcome {
    Solved { values: Vec<BigInt>, general: Option<GeneralSolution> },
    Infeasible,
    /// Nonnegative search box exhausted without a decision.
    BoundExceeded,
}

impl LinearOutcome {
    pub fn values(&self) -> Option<&[BigInt]> {
        match self {
            LinearOutcome::Solved { values, .. } => Some(values),
            _ => None,
        }
    }
}

impl LinearSystem {
    pub fn new(rows: IntMatrix, rhs: Vec<BigInt>, kinds: Vec<VarKind>) -> Result<Self> {
        let sys = LinearSystem { rows, rhs, kinds, parity: Vec::new() };
        sys.validate()?;
        Ok(sys)
    }

    pub fn free(rows: IntMatrix, rhs: Vec<BigInt>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        LinearSystem::new(rows, rhs, vec![VarKind::Free; n])
    }

    pub fn with_parity(mut self, vars: Vec<usize>, residue: u8) -> Result<Self> {
        self.parity.push(Parity { vars, residue: residue % 2 });
        self.validate()?;
        Ok(self)
    }

    pub fn num_vars(&self) -> usize {
        self.kinds.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.kinds.len();
        if self.rows.len() != self.rhs.len() {
            return Err(Error::DimensionMismatch(format!("{} rows but {} right-hand sides", self.rows.len(), self.rhs.len())));
        }
        if let Some(r) = self.rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("row of length {} for {n} variables", r.len())));
        }
        if self.parity.iter().flat_map(|p| &p.vars).any(|&v| v >= n) {
            return Err(Error::DimensionMismatch("parity constraint on unknown variable".into()));
        }
        Ok(())
    }

    /// Whether `values` satisfies equations, sign flags and parities.
    pub fn check(&self, values: &[BigInt]) -> bool {
        values.len() == self.num_vars()
            && self.rows.iter().zip(&self.rhs).all(|(row, b)| {
                row.iter().zip(values).map(|(a, x)| a * x).sum::<BigInt>() == *b
            })
            && self.kinds.iter().zip(values).all(|(k, x)| *k == VarKind::Free || !x.is_negative())
            && self.parity.iter().all(|p| {
                let s: BigInt = p.vars.iter().map(|&v| &values[v]).sum();
                s.mod_floor(&BigInt::from(2)) == BigInt::from(p.residue)
            })
    }

    /// Parity constraints become equations `Σ x_i - 2k = r` over fresh free `k`.
    fn without_parity(&self) -> LinearSystem {
        let n = self.num_vars();
        let extra = self.parity.len();
        let mut rows: IntMatrix = self
            .rows
            .iter()
            .map(|r| r.iter().cloned().chain(std::iter::repeat_n(BigInt::zero(), extra)).collect())
            .collect();
        let mut rhs = self.rhs.clone();
        for (j, p) in self.parity.iter().enumerate() {
            let mut row = vec![BigInt::zero(); n + extra];
            for &v in &p.vars {
                row[v] += 1;
            }
            row[n + j] = BigInt::from(-2);
            rows.push(row);
            rhs.push(BigInt::from(p.residue));
        }
        let mut kinds = self.kinds.clone();
        kinds.extend(std::iter::repeat_n(VarKind::Free, extra));
        LinearSystem { rows, rhs, kinds, parity: Vec::new() }
    }
}

/// Exact solution of `A·x = b` over Z, or `None` if there is none.
pub fn solve_free(a: &IntMatrix, b: &[BigInt], n: usize) -> Option<GeneralSolution> {
    let m = a.len();
    if n == 0 {
        return b.iter().all(Zero::is_zero).then(|| GeneralSolution { particular: Vec::new(), basis: Vec::new() });
    }
    // H = U·Aᵀ, so A·Uᵀ = Hᵀ; substitute x = Uᵀ·z.
    let at: IntMatrix = (0..n).map(|j| (0..m).map(|i| a[i][j].clone()).collect()).collect();
    let (h, u) = hnf(&at);
    let rank = h.iter().take_while(|r| r.iter().any(|x| !x.is_zero())).count();
    let mut z = vec![BigInt::zero(); rank];
    let mut next = 0;
    for j in 0..m {
        let partial: BigInt = (0..next).map(|k| &z[k] * &h[k][j]).sum();
        if next < rank && !h[next][j].is_zero() {
            z[next] = exact_div(&(&b[j] - partial), &h[next][j])?;
            next += 1;
        } else if partial != b[j] {
            return None;
        }
    }
    let mut particular = vec![BigInt::zero(); n];
    for (k, zk) in z.iter().enumerate() {
        for (x, uk) in particular.iter_mut().zip(&u[k]) {
            *x += zk * uk;
        }
    }
    Some(GeneralSolution { particular, basis: u[rank..].to_vec() })
}

/// Side length of the box searched for nonnegative variables when no exact
/// method applies.
const NONNEG_BOX: i64 = 12;

/// Solves a linear system exactly when every variable is free or when it is
/// one equation (parity constraints aside); otherwise searches a box of
/// nonnegative values and reports [`LinearOutcome::BoundExceeded`] if the box
/// is exhausted.
pub fn solve_linear(sys: &LinearSystem) -> Result<LinearOutcome> {
    sys.validate()?;
    let n = sys.num_vars();
    let flat = sys.without_parity();
    let total = flat.num_vars();
    let Some(relaxed) = solve_free(&flat.rows, &flat.rhs, total) else {
        return Ok(LinearOutcome::Infeasible);
    };
    if sys.kinds.iter().all(|k| *k == VarKind::Free) {
        let mut values = relaxed.particular.clone();
        values.truncate(n);
        let general = sys.parity.is_empty().then_some(relaxed);
        return Ok(LinearOutcome::Solved { values, general });
    }
    if sys.rows.len() == 1 && sys.parity.is_empty() {
        return Ok(match solve_single_equation(&sys.rows[0], &sys.rhs[0], &sys.kinds) {
            Some(values) => LinearOutcome::Solved { values, general: None },
            None => LinearOutcome::Infeasible,
        });
    }
    Ok(box_search(&flat, n))
}

/// Enumerates nonnegative variables in `[0, NONNEG_BOX)` and solves the free
/// remainder exactly.
fn box_search(flat: &LinearSystem, n: usize) -> LinearOutcome {
    let nonneg: Vec<usize> = (0..flat.num_vars()).filter(|&v| flat.kinds[v] == VarKind::Nonneg).collect();
    let free: Vec<usize> = (0..flat.num_vars()).filter(|&v| flat.kinds[v] == VarKind::Free).collect();
    let mut counter = vec![0i64; nonneg.len()];
    loop {
        let rhs: Vec<BigInt> = flat
            .rows
            .iter()
            .zip(&flat.rhs)
            .map(|(row, b)| b - nonneg.iter().zip(&counter).map(|(&v, &c)| &row[v] * c).sum::<BigInt>())
            .collect();
        let sub: IntMatrix = flat.rows.iter().map(|row| free.iter().map(|&v| row[v].clone()).collect()).collect();
        if let Some(sol) = solve_free(&sub, &rhs, free.len()) {
            let mut values = vec![BigInt::zero(); flat.num_vars()];
            for (&v, &c) in nonneg.iter().zip(&counter) {
                values[v] = BigInt::from(c);
            }
            for (&v, x) in free.iter().zip(sol.particular) {
                values[v] = x;
            }
            values.truncate(n);
            return LinearOutcome::Solved { values, general: None };
        }
        let Some(pos) = counter.iter().position(|&c| c + 1 < NONNEG_BOX) else {
            return LinearOutcome::BoundExceeded;
        };
        counter[pos] += 1;
        counter[..pos].iter_mut().for_each(|c| *c = 0);
    }
}

/// `Σ a_i x_i = b` with the given sign flags, decided exactly.
fn solve_single_equation(a: &[BigInt], b: &BigInt, kinds: &[VarKind]) -> Option<Vec<BigInt>> {
    let n = a.len();
    let free: Vec<usize> = (0..n).filter(|&i| kinds[i] == VarKind::Free && !a[i].is_zero()).collect();
    let nonneg: Vec<usize> = (0..n).filter(|&i| kinds[i] == VarKind::Nonneg && !a[i].is_zero()).collect();
    let gf = free.iter().fold(BigInt::zero(), |g, &i| gcd(&g, &a[i]));
    let mut values = vec![BigInt::zero(); n];

    let monoid_part = if gf.is_zero() {
        represent_in_monoid(&nonneg.iter().map(|&i| a[i].clone()).collect::<Vec<_>>(), b)?
    } else {
        // smallest nonneg combination in the right residue class modulo gf
        let coeffs: Vec<BigInt> = nonneg.iter().map(|&i| a[i].mod_floor(&gf)).collect();
        residue_combination(&coeffs, &b.mod_floor(&gf), &gf)?
    };
    let mut reached = BigInt::zero();
    for (&i, c) in nonneg.iter().zip(monoid_part) {
        reached += &a[i] * &c;
        values[i] = c;
    }
    if !free.is_empty() {
        let rest = b - reached;
        let coeffs: Vec<BigInt> = free.iter().map(|&i| a[i].clone()).collect();
        let sol = solve_free(&[coeffs].to_vec(), &[rest], free.len())?;
        for (&i, x) in free.iter().zip(sol.particular) {
            values[i] = x;
        }
    }
    Some(values)
}

/// Nonnegative counts `c` with `Σ c_i·coeffs_i ≡ target (mod modulus)`, by
/// breadth-first search over residues.
fn residue_combination(coeffs: &[BigInt], target: &BigInt, modulus: &BigInt) -> Option<Vec<BigInt>> {
    let m = modulus.to_usize()?;
    let cs: Vec<usize> = coeffs.iter().map(|c| c.to_usize().unwrap_or(0)).collect();
    let start = 0usize;
    let goal = target.to_usize()?;
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; m];
    let mut seen = vec![false; m];
    seen[start] = true;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(r) = queue.pop_front() {
        if r == goal {
            break;
        }
        for (i, &c) in cs.iter().enumerate() {
            let s = (r + c) % m;
            if !seen[s] {
                seen[s] = true;
                parent[s] = Some((r, i));
                queue.push_back(s);
            }
        }
    }
    if !seen[goal] {
        return None;
    }
    let mut counts = vec![BigInt::zero(); coeffs.len()];
    let mut cur = goal;
    while let Some((prev, i)) = parent[cur] {
        counts[i] += 1;
        cur = prev;
    }
    Some(counts)
}

/// Nonnegative counts `c` with `Σ c_i·gens_i = target` over nonzero generators.
pub fn represent_in_monoid(gens: &[BigInt], target: &BigInt) -> Option<Vec<BigInt>> {
    let k = gens.len();
    if target.is_zero() {
        return Some(vec![BigInt::zero(); k]);
    }
    let g = gens.iter().fold(BigInt::zero(), |g, x| gcd(&g, x));
    if g.is_zero() || !target.is_multiple_of(&g) {
        return None;
    }
    let pos: Vec<usize> = (0..k).filter(|&i| gens[i].is_positive()).collect();
    let neg: Vec<usize> = (0..k).filter(|&i| gens[i].is_negative()).collect();
    if !pos.is_empty() && !neg.is_empty() {
        // mixed signs generate the group gZ: Bézout, then add copies of a
        // zero-sum vector with all-positive support until nonnegative
        let sol = solve_free(&vec![gens.to_vec()], std::slice::from_ref(target), k)?;
        let mut counts = sol.particular;
        let (p, q) = (pos[0], neg[0]);
        let mut kernel = vec![BigInt::zero(); k];
        kernel[p] = -gens[q].clone();
        kernel[q] = gens[p].clone();
        for i in 0..k {
            if i != p && i != q && counts[i].is_negative() {
                // balance a negative count of i with a positive/negative partner
                let partner = if gens[i].is_positive() { q } else { p };
                let deficit = -counts[i].clone();
                counts[i] = BigInt::zero();
                let lcm = gens[i].abs().lcm(&gens[partner].abs());
                let step_i = &lcm / gens[i].abs();
                let step_partner = &lcm / gens[partner].abs();
                let rounds = deficit.div_ceil(&step_i);
                counts[i] += &rounds * &step_i - &deficit;
                counts[partner] += &rounds * &step_partner;
            }
        }
        let need = [p, q]
            .iter()
            .filter(|&&i| counts[i].is_negative())
            .map(|&i| (-counts[i].clone()).div_ceil(&kernel[i]))
            .max()
            .unwrap_or_default();
        for i in 0..k {
            counts[i] += &need * &kernel[i];
        }
        debug_assert!(counts.iter().all(|c| !c.is_negative()));
        return Some(counts);
    }
    let sign = if pos.is_empty() { -1 } else { 1 };
    if target.signum() != BigInt::from(sign) {
        return None;
    }
    let support = if sign > 0 { pos } else { neg };
    let vals: Vec<usize> = support.iter().map(|&i| (gens[i].abs() / &g).to_usize()).collect::<Option<_>>()?;
    let t = (target.abs() / &g).to_usize()?;
    let amin = *vals.iter().min()?;
    let amax = *vals.iter().max()?;
    let schur = (amin - 1) * (amax - 1);
    // values >= schur are all representable; peel off amin until inside the table
    let (peeled, rest) = if t > schur + amin { ((t - schur) / amin, t - (t - schur) / amin * amin) } else { (0, t) };
    let mut best: Vec<Option<usize>> = vec![None; rest + 1];
    let mut reach = vec![false; rest + 1];
    reach[0] = true;
    for s in 1..=rest {
        if let Some(i) = (0..vals.len()).find(|&i| vals[i] <= s && reach[s - vals[i]]) {
            reach[s] = true;
            best[s] = Some(i);
        }
    }
    if !reach[rest] {
        return None;
    }
    let mut counts = vec![BigInt::zero(); k];
    let imin = support[vals.iter().position(|&v| v == amin)?];
    counts[imin] += peeled;
    let mut s = rest;
    while s > 0 {
        let i = best[s]?;
        counts[support[i]] += 1;
        s -= vals[i];
    }
    Some(counts)
}

/// Direction of a progression's period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    /// `base + period·N`
    Up,
    /// `base - period·N`
    Down,
    /// `base + period·Z`
    Both,
}

/// One component `base + period·N` (or `-N`, `Z`); period 0 is a single point.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Progression {
    pub base: BigInt,
    pub period: BigInt,
    pub dir: Direction,
}

impl Progression {
    fn normalized(base: BigInt, period: BigInt, dir: Direction) -> Self {
        let period = period.abs();
        if period.is_zero() {
            return Progression { base, period, dir: Direction::Up };
        }
        if dir == Direction::Both {
            return Progression { base: base.mod_floor(&period), period, dir };
        }
        Progression { base, period, dir }
    }

    pub fn point(v: BigInt) -> Self {
        Progression::normalized(v, BigInt::zero(), Direction::Up)
    }

    pub fn contains(&self, t: &BigInt) -> bool {
        let d = t - &self.base;
        if self.period.is_zero() {
            return d.is_zero();
        }
        d.is_multiple_of(&self.period)
            && match self.dir {
                Direction::Up => !d.is_negative(),
                Direction::Down => !d.is_positive(),
                Direction::Both => true,
            }
    }

    /// Whether every element of `other` lies in `self`.
    fn covers(&self, other: &Progression) -> bool {
        if other.period.is_zero() {
            return self.contains(&other.base);
        }
        if self.period.is_zero() || !other.period.is_multiple_of(&self.period) || !self.contains_mod(&other.base) {
            return false;
        }
        match (self.dir, other.dir) {
            (Direction::Both, _) => true,
            (Direction::Up, Direction::Up) => other.base >= self.base,
            (Direction::Down, Direction::Down) => other.base <= self.base,
            _ => false,
        }
    }

    fn contains_mod(&self, t: &BigInt) -> bool {
        (t - &self.base).is_multiple_of(&self.period)
    }

    fn shift(&self, d: &BigInt) -> Progression {
        Progression::normalized(&self.base + d, self.period.clone(), self.dir)
    }

    fn scale(&self, k: &BigInt) -> Progression {
        let dir = match self.dir {
            Direction::Up if k.is_negative() => Direction::Down,
            Direction::Down if k.is_negative() => Direction::Up,
            d => d,
        };
        Progression::normalized(&self.base * k, &self.period * k, dir)
    }
}

impl fmt::Debug for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.period.is_zero(), self.dir) {
            (true, _) => write!(f, "{{{}}}", self.base),
            (false, Direction::Up) => write!(f, "{}+{}N", self.base, self.period),
            (false, Direction::Down) => write!(f, "{}-{}N", self.base, self.period),
            (false, Direction::Both) => write!(f, "{}+{}Z", self.base, self.period),
        }
    }
}

/// Finite union of progressions with one period each.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SemilinearSet {
    comps: Vec<Progression>,
}

impl fmt::Debug for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.comps.iter().map(|c| format!("{c:?}")).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

impl SemilinearSet {
    pub fn empty() -> Self {
        SemilinearSet::default()
    }

    pub fn point(v: impl Into<BigInt>) -> Self {
        SemilinearSet { comps: vec![Progression::point(v.into())] }
    }

    /// `base + period·N`.
    pub fn of_progression(base: impl Into<BigInt>, period: impl Into<BigInt>) -> Self {
        SemilinearSet::from_components(vec![Progression::normalized(base.into(), period.into(), Direction::Up)])
    }

    /// `base + period·Z`.
    pub fn of_lattice(base: impl Into<BigInt>, period: impl Into<BigInt>) -> Self {
        SemilinearSet::from_components(vec![Progression::normalized(base.into(), period.into(), Direction::Both)])
    }

    /// The submonoid `{Σ n_i·gens_i : n_i ∈ N}` of Z.
    pub fn monoid(gens: &[BigInt]) -> Self {
        let nonzero: Vec<&BigInt> = gens.iter().filter(|g| !g.is_zero()).collect();
        if nonzero.is_empty() {
            return SemilinearSet::point(0);
        }
        let g = nonzero.iter().fold(BigInt::zero(), |acc, x| gcd(&acc, x));
        let positive = nonzero.iter().any(|x| x.is_positive());
        let negative = nonzero.iter().any(|x| x.is_negative());
        if positive && negative {
            return SemilinearSet::of_lattice(0, g);
        }
        let sign = if positive { BigInt::one() } else { -BigInt::one() };
        let Some(vals) = nonzero.iter().map(|x| (x.abs() / &g).to_usize()).collect::<Option<Vec<usize>>>() else {
            return SemilinearSet::of_progression(0, g).scale(&sign);
        };
        let (amin, amax) = (*vals.iter().min().unwrap(), *vals.iter().max().unwrap());
        let conductor = (amin - 1) * (amax - 1);
        let mut reach = vec![false; conductor.max(1)];
        reach[0] = true;
        for s in 1..conductor {
            reach[s] = vals.iter().any(|&v| v <= s && reach[s - v]);
        }
        let mut comps: Vec<Progression> = (0..conductor)
            .filter(|&s| reach[s])
            .map(|s| Progression::point(BigInt::from(s) * &g))
            .collect();
        comps.push(Progression::normalized(BigInt::from(conductor) * &g, g.clone(), Direction::Up));
        SemilinearSet::from_components(comps).scale(&sign)
    }

    pub fn from_components(comps: Vec<Progression>) -> Self {
        let mut s = SemilinearSet { comps };
        s.normalize();
        s
    }

    pub fn components(&self) -> &[Progression] {
        &self.comps
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    fn normalize(&mut self) {
        self.comps.sort();
        self.comps.dedup();
        let comps = std::mem::take(&mut self.comps);
        for (i, c) in comps.iter().enumerate() {
            let redundant = comps
                .iter()
                .enumerate()
                .any(|(j, d)| j != i && d.covers(c) && (!c.covers(d) || j < i));
            if !redundant {
                self.comps.push(c.clone());
            }
        }
    }

    pub fn member(&self, t: &BigInt) -> bool {
        self.comps.iter().any(|c| c.contains(t))
    }

    pub fn union(&self, other: &SemilinearSet) -> SemilinearSet {
        SemilinearSet::from_components(self.comps.iter().chain(&other.comps).cloned().collect())
    }

    pub fn shift(&self, d: &BigInt) -> SemilinearSet {
        SemilinearSet::from_components(self.comps.iter().map(|c| c.shift(d)).collect())
    }

    pub fn scale(&self, k: &BigInt) -> SemilinearSet {
        if k.is_zero() {
            return if self.is_empty() { SemilinearSet::empty() } else { SemilinearSet::point(0) };
        }
        SemilinearSet::from_components(self.comps.iter().map(|c| c.scale(k)).collect())
    }

    /// Minkowski sum `{s + t}`.
    pub fn sum(&self, other: &SemilinearSet) -> SemilinearSet {
        let mut comps = Vec::new();
        for a in &self.comps {
            for b in &other.comps {
                comps.extend(sum_components(a, b));
            }
        }
        SemilinearSet::from_components(comps)
    }

    /// Elements in `[lo, hi]`, ascending.
    pub fn elements_in(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&v| self.member(&BigInt::from(v))).collect()
    }
}

fn sum_components(a: &Progression, b: &Progression) -> Vec<Progression> {
    if a.period.is_zero() {
        return vec![b.shift(&a.base)];
    }
    if b.period.is_zero() {
        return vec![a.shift(&b.base)];
    }
    let base = &a.base + &b.base;
    let g = gcd(&a.period, &b.period);
    match (a.dir, b.dir) {
        (Direction::Up, Direction::Up) | (Direction::Down, Direction::Down) => {
            let sign = if a.dir == Direction::Up { BigInt::one() } else { -BigInt::one() };
            numerical_semigroup(&a.period, &b.period)
                .into_iter()
                .map(|p| p.scale(&sign).shift(&base))
                .collect()
        }
        _ => vec![Progression::normalized(base, g, Direction::Both)],
    }
}

/// `p·N + q·N` for positive `p, q` as points below the conductor plus a tail.
fn numerical_semigroup(p: &BigInt, q: &BigInt) -> Vec<Progression> {
    let g = gcd(p, q);
    let (Some(a), Some(b)) = ((p / &g).to_usize(), (q / &g).to_usize()) else {
        // astronomically large periods: fall back to the coarser lattice tail
        return vec![Progression::normalized(BigInt::zero(), g, Direction::Up)];
    };
    let conductor = (a - 1) * (b - 1);
    let mut reach = vec![false; conductor.max(1)];
    reach[0] = true;
    for s in 1..conductor {
        reach[s] = (s >= a && reach[s - a]) || (s >= b && reach[s - b]);
    }
    let mut out: Vec<Progression> = (0..conductor)
        .filter(|&s| reach[s])
        .map(|s| Progression::point(BigInt::from(s) * &g))
        .collect();
    out.push(Progression::normalized(BigInt::from(conductor) * &g, g, Direction::Up));
    out
}
