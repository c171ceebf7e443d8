use std::fmt;

/// Per-variable differentiation counts; `u_xt` and `u_tx` share one index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(p: usize) -> Self {
        MultiIndex(vec![0; p])
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        MultiIndex(counts)
    }

    /// Unit index `e_i` in `p` variables.
    pub fn unit(p: usize, i: usize) -> Self {
        let mut m = Self::zero(p);
        m.0[i] = 1;
        m
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn order(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    /// `(J, i)`: increments the count of direction `i`.
    pub fn append(&self, i: usize) -> Self {
        let mut m = self.clone();
        m.0[i] += 1;
        m
    }

    pub fn decrement(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.0[i] -= 1;
        Some(m)
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !self.dominates(other) {
            return None;
        }
        Some(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Direction along which this index is reached from its canonical parent:
    /// the highest direction with a positive count.
    pub fn last_direction(&self) -> Option<usize> {
        self.0.iter().rposition(|&c| c > 0)
    }

    /// All multi-indices in `p` variables of exactly `order`, in ascending order.
    pub fn all_of_order(p: usize, order: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; p];
        fn rec(pos: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if pos + 1 == cur.len() {
                cur[pos] = left as u32;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for c in 0..=left {
                cur[pos] = c as u32;
                rec(pos + 1, left - c, cur, out);
            }
        }
        if p == 0 {
            return out;
        }
        rec(0, order, &mut cur, &mut out);
        out.sort();
        out
    }

    /// All multi-indices with order at most `max_order`, grouped by increasing order.
    pub fn up_to(p: usize, max_order: usize) -> Vec<MultiIndex> {
        (0..=max_order)
            .flat_map(|k| Self::all_of_order(p, k))
            .collect()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
