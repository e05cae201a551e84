//! Arithmetic in `Z_k` and in finite abelian groups given as a direct sum of
//! cyclic factors, plus the near-arithmetic-progression machinery that drives
//! the directed solver.
//!
//! Group elements are stored packed: a [`GroupElem`] is the mixed-radix index
//! of its residue vector (first factor most significant), so elements of `Z_k`
//! are simply their residue.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Number of prime factors of `k` counted with multiplicity. `omega(1) = 0`.
pub fn omega(k: i64) -> Result<u32> {
    if k <= 0 {
        return domain(format!("omega is defined for k >= 1, got {k}"));
    }
    let mut k = k as u64;
    let mut count = 0;
    let mut p = 2u64;
    while p * p <= k {
        while k.is_multiple_of(p) {
            k /= p;
            count += 1;
        }
        p += 1;
    }
    if k > 1 {
        count += 1;
    }
    Ok(count)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Divisors `d` of `k` with `1 < d < k`, ascending.
pub fn proper_divisors(k: u32) -> Vec<u32> {
    (2..k).filter(|d| k.is_multiple_of(*d)).collect()
}

/// A group element, packed as the mixed-radix index of its residue vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElem(pub(crate) u32);

impl GroupElem {
    /// Packed index in `[0, order)`. For `Z_k` this is the residue itself.
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite abelian group `Z_{k_1} + ... + Z_{k_m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct GroupSpec {
    factors: Vec<u32>,
    order: u32,
}

impl TryFrom<Vec<u32>> for GroupSpec {
    type Error = Error;

    fn try_from(factors: Vec<u32>) -> Result<Self> {
        GroupSpec::new(factors)
    }
}

impl From<GroupSpec> for Vec<u32> {
    fn from(g: GroupSpec) -> Self {
        g.factors
    }
}

impl GroupSpec {
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        if factors.is_empty() {
            return domain("a group needs at least one cyclic factor");
        }
        let mut order: u64 = 1;
        for &f in &factors {
            if f < 2 {
                return domain(format!("cyclic factor {f} is below 2"));
            }
            order *= f as u64;
            if order > u32::MAX as u64 / 2 {
                return domain("group order too large");
            }
        }
        Ok(GroupSpec {
            factors,
            order: order as u32,
        })
    }

    /// The cyclic group `Z_k`.
    pub fn cyclic(k: u32) -> Result<Self> {
        GroupSpec::new(vec![k])
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `Some(k)` when the group is presented as the single factor `Z_k`.
    pub fn cyclic_modulus(&self) -> Option<u32> {
        match self.factors.as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem(0)
    }

    /// Element with packed index `i mod order`; for `Z_k` this is `i mod k`.
    pub fn elem(&self, i: i64) -> GroupElem {
        GroupElem(i.rem_euclid(self.order as i64) as u32)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElem> {
        (0..self.order).map(GroupElem)
    }

    pub fn from_residues(&self, residues: &[i64]) -> Result<GroupElem> {
        if residues.len() != self.factors.len() {
            return domain(format!(
                "expected {} residues, got {}",
                self.factors.len(),
                residues.len()
            ));
        }
        let mut idx: u32 = 0;
        for (&r, &k) in residues.iter().zip(&self.factors) {
            if r < 0 || r >= k as i64 {
                return domain(format!("residue {r} out of range for Z_{k}"));
            }
            idx = idx * k + r as u32;
        }
        Ok(GroupElem(idx))
    }

    pub fn residues(&self, e: GroupElem) -> Vec<u32> {
        let mut out = vec![0; self.factors.len()];
        let mut idx = e.0;
        for (slot, &k) in out.iter_mut().zip(&self.factors).rev() {
            *slot = idx % k;
            idx /= k;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: GroupElem, b: GroupElem) -> GroupElem {
        if let [k] = self.factors.as_slice() {
            let s = a.0 + b.0;
            return GroupElem(if s >= *k { s - k } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut scale = 1;
        for &k in self.factors.iter().rev() {
            let s = (x % k + y % k) % k;
            out += s * scale;
            scale *= k;
            x /= k;
            y /= k;
        }
        GroupElem(out)
    }

    #[inline]
    pub fn neg(&self, a: GroupElem) -> GroupElem {
        if let [k] = self.factors.as_slice() {
            return GroupElem(if a.0 == 0 { 0 } else { k - a.0 });
        }
        let mut x = a.0;
        let mut out = 0;
        let mut scale = 1;
        for &k in self.factors.iter().rev() {
            let r = x % k;
            out += ((k - r) % k) * scale;
            scale *= k;
            x /= k;
        }
        GroupElem(out)
    }

    #[inline]
    pub fn sub(&self, a: GroupElem, b: GroupElem) -> GroupElem {
        self.add(a, self.neg(b))
    }

    pub fn sum<I: IntoIterator<Item = GroupElem>>(&self, it: I) -> GroupElem {
        it.into_iter().fold(self.zero(), |acc, e| self.add(acc, e))
    }

    /// `n * a`.
    pub fn times(&self, n: u32, a: GroupElem) -> GroupElem {
        let mut acc = self.zero();
        for _ in 0..n {
            acc = self.add(acc, a);
        }
        acc
    }
}

/// A subset of `Z_k`, kept sorted. Serialized as the sorted member list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    modulus: u32,
    members: Vec<u32>,
}

impl Serialize for ResidueSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(s)
    }
}

impl ResidueSet {
    pub fn new(modulus: u32, members: impl IntoIterator<Item = i64>) -> Result<Self> {
        if modulus < 1 {
            return domain("modulus must be positive");
        }
        let mut m: Vec<u32> = Vec::new();
        for x in members {
            if x < 0 || x >= modulus as i64 {
                return domain(format!("{x} is not a residue mod {modulus}"));
            }
            m.push(x as u32);
        }
        m.sort_unstable();
        m.dedup();
        Ok(ResidueSet { modulus, members: m })
    }

    /// Build from a bitmask over `0..modulus` (bit `i` set means `i` is a member).
    pub fn from_mask(modulus: u32, mask: u64) -> Self {
        let members = (0..modulus).filter(|i| mask >> i & 1 == 1).collect();
        ResidueSet { modulus, members }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    fn indicator(&self) -> Vec<bool> {
        let mut ind = vec![false; self.modulus as usize];
        for &m in &self.members {
            ind[m as usize] = true;
        }
        ind
    }
}

/// `X(A)`: every `x` such that some `(|A|-1)`-subset of `A` shifted by `x`
/// stays inside `A`. Brute force over the removed element and all `k` shifts.
pub fn shift_set(a: &ResidueSet) -> ResidueSet {
    let k = a.modulus;
    let ind = a.indicator();
    let mut hit = vec![false; k as usize];
    for &removed in &a.members {
        for x in 0..k {
            if hit[x as usize] {
                continue;
            }
            let ok = a
                .members
                .iter()
                .filter(|&&b| b != removed)
                .all(|&b| ind[((b + x) % k) as usize]);
            if ok {
                hit[x as usize] = true;
            }
        }
    }
    ResidueSet {
        modulus: k,
        members: (0..k).filter(|&x| hit[x as usize]).collect(),
    }
}

/// `(B, a)` with `|B| = |A| - 1`, `a != 0` and `B + a` inside `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NearApWitness {
    pub base: ResidueSet,
    pub shift: u32,
}

/// Near-AP test. A witness whose base is invariant under its shift
/// (`B + a = B`) is preferred; otherwise the smallest shift wins, ties going
/// to the smallest removed element.
pub fn is_near_ap(a: &ResidueSet) -> Option<NearApWitness> {
    let k = a.modulus;
    let n = a.members.len();
    if n < 2 || n + 2 > k as usize {
        return None;
    }
    let ind = a.indicator();
    let mut fallback: Option<NearApWitness> = None;
    for x in 1..k {
        for &removed in &a.members {
            let base: Vec<u32> = a.members.iter().copied().filter(|&b| b != removed).collect();
            if !base.iter().all(|&b| ind[((b + x) % k) as usize]) {
                continue;
            }
            let stable = base.iter().all(|&b| base.binary_search(&((b + x) % k)).is_ok());
            let w = NearApWitness {
                base: ResidueSet {
                    modulus: k,
                    members: base,
                },
                shift: x,
            };
            if stable {
                return Some(w);
            }
            if fallback.is_none() {
                fallback = Some(w);
            }
        }
    }
    fallback
}

/// Which of the two structural alternatives holds for a near-AP.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case")]
pub enum NearApClass {
    NotNearAp,
    /// Every shift is a multiple of `d`; `d` is the largest such proper divisor.
    DivisorCase {
        d: u32,
    },
    /// Every shift lies in `{0, a, -a}` with `gcd(a, k) = 1`, `a <= k - a`.
    UnitCase {
        a: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NearApClassification {
    #[serde(flatten)]
    pub class: NearApClass,
    pub witness: Option<NearApWitness>,
    pub shift_set: ResidueSet,
}

pub fn classify_near_ap(a: &ResidueSet) -> Result<NearApClassification> {
    let shifts = shift_set(a);
    let Some(witness) = is_near_ap(a) else {
        return Ok(NearApClassification {
            class: NearApClass::NotNearAp,
            witness: None,
            shift_set: shifts,
        });
    };
    let k = a.modulus;
    let class = match divisor_case(k, &shifts) {
        Some(d) => NearApClass::DivisorCase { d },
        None => match unit_case(k, &shifts) {
            Some(a) => NearApClass::UnitCase { a },
            None => {
                return Err(Error::LemmaViolation(format!(
                    "near-AP {:?} in Z_{k} has shift set {:?} fitting neither case",
                    a.members, shifts.members
                )))
            }
        },
    };
    Ok(NearApClassification {
        class,
        witness: Some(witness),
        shift_set: shifts,
    })
}

fn divisor_case(k: u32, shifts: &ResidueSet) -> Option<u32> {
    proper_divisors(k)
        .into_iter()
        .rev()
        .find(|d| shifts.members.iter().all(|x| x % d == 0))
}

fn unit_case(k: u32, shifts: &ResidueSet) -> Option<u32> {
    let nonzero: Vec<u32> = shifts.members.iter().copied().filter(|&x| x != 0).collect();
    let a = *nonzero.first()?;
    let a = a.min(k - a);
    if gcd(a as u64, k as u64) != 1 {
        return None;
    }
    nonzero.iter().all(|&x| x == a || x == k - a).then_some(a)
}
