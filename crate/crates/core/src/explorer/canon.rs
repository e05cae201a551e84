//! Indexed weightings of the complete digraph and isomorph rejection.
//!
//! A weighting is the digit vector of its index in base `b`, one digit per
//! ordered pair `(i, j)`, `i != j`, in lexicographic pair order with the first
//! pair most significant. Index order is then lexicographic digit order, so
//! the canonical member of a relabeling orbit is the one with least index.

/// Relabelings are only enumerated up to this order.
const MAX_PRUNE_ORDER: usize = 6;

pub(crate) struct ArcSpace {
    pub n: usize,
    pub base: u32,
    pub pairs: Vec<(usize, usize)>,
    /// For each non-identity relabeling, the source slot of every slot.
    perms: Vec<Vec<usize>>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

impl ArcSpace {
    pub fn new(n: usize, base: u32, prune: bool) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let slot = |a: usize, b: usize| a * (n - 1) + if b > a { b - 1 } else { b };
        let perms = if prune && n <= MAX_PRUNE_ORDER {
            permutations(n)
                .into_iter()
                .filter(|p| p.iter().enumerate().any(|(i, &v)| i != v))
                .map(|p| {
                    // Relabeled weighting w'(p[i], p[j]) = w(i, j).
                    let mut inv = vec![0; n];
                    for (i, &v) in p.iter().enumerate() {
                        inv[v] = i;
                    }
                    pairs.iter().map(|&(a, b)| slot(inv[a], inv[b])).collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        ArcSpace { n, base, pairs, perms }
    }

    pub fn slots(&self) -> usize {
        self.pairs.len()
    }

    /// `base^(n(n-1))`, if it fits.
    pub fn total(&self) -> Option<u64> {
        (self.base as u64).checked_pow(self.slots() as u32)
    }

    pub fn decode(&self, index: u64, digits: &mut [u32]) {
        decode(index, self.base, digits);
    }

    /// `true` when no relabeling gives a lexicographically smaller vector.
    pub fn is_canonical(&self, digits: &[u32]) -> bool {
        self.perms.iter().all(|src| {
            for (p, &s) in src.iter().enumerate() {
                match digits[s].cmp(&digits[p]) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => return true,
                    std::cmp::Ordering::Equal => {}
                }
            }
            true
        })
    }
}

/// Base-`base` digits of `index`, most significant first.
pub(crate) fn decode(mut index: u64, base: u32, digits: &mut [u32]) {
    for d in digits.iter_mut().rev() {
        *d = (index % base as u64) as u32;
        index /= base as u64;
    }
}
