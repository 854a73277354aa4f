use super::NodeId;

/// Compressed sparse row adjacency with sorted rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Csr {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Csr {
    /// Build from `(row, col)` pairs already sorted by `(row, col)`.
    pub(crate) fn from_sorted_pairs<I>(rows: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut offsets = vec![0usize; rows + 1];
        let mut targets = Vec::new();
        for (r, c) in pairs {
            offsets[r as usize + 1] += 1;
            targets.push(c);
        }
        for i in 0..rows {
            offsets[i + 1] += offsets[i];
        }
        Self { offsets, targets }
    }

    pub(crate) fn from_parts(offsets: Vec<usize>, targets: Vec<NodeId>) -> Option<Self> {
        let ok = !offsets.is_empty()
            && offsets[0] == 0
            && offsets.windows(2).all(|w| w[0] <= w[1])
            && *offsets.last().unwrap() == targets.len();
        ok.then_some(Self { offsets, targets })
    }

    pub fn row_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.targets.len()
    }

    pub fn row(&self, r: usize) -> &[NodeId] {
        &self.targets[self.offsets[r]..self.offsets[r + 1]]
    }

    pub fn degree(&self, r: usize) -> usize {
        self.offsets[r + 1] - self.offsets[r]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn targets(&self) -> &[NodeId] {
        &self.targets
    }

    /// Counting-sort transpose; rows of the result are sorted because rows of
    /// `self` are visited in order.
    pub(crate) fn transpose(&self) -> Self {
        let n = self.row_count();
        let mut counts = vec![0usize; n + 1];
        for &c in &self.targets {
            counts[c as usize + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let mut targets = vec![0; self.targets.len()];
        for r in 0..n {
            for &c in self.row(r) {
                targets[cursor[c as usize]] = r as NodeId;
                cursor[c as usize] += 1;
            }
        }
        Self { offsets, targets }
    }

    /// Row-wise sorted union.
    pub(crate) fn union(&self, other: &Csr) -> Self {
        let n = self.row_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(self.nnz() + other.nnz());
        offsets.push(0);
        for r in 0..n {
            let (a, b) = (self.row(r), other.row(r));
            let (mut i, mut j) = (0, 0);
            while i < a.len() || j < b.len() {
                let next = match (a.get(i), b.get(j)) {
                    (Some(&x), Some(&y)) if x == y => {
                        i += 1;
                        j += 1;
                        x
                    }
                    (Some(&x), Some(&y)) if x < y => {
                        i += 1;
                        x
                    }
                    (Some(_), Some(&y)) => {
                        j += 1;
                        y
                    }
                    (Some(&x), None) => {
                        i += 1;
                        x
                    }
                    (None, Some(&y)) => {
                        j += 1;
                        y
                    }
                    (None, None) => unreachable!(),
                };
                targets.push(next);
            }
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    pub(crate) fn extend_rows(&self, extra: usize) -> Self {
        let mut offsets = self.offsets.clone();
        let last = *offsets.last().unwrap();
        offsets.extend(std::iter::repeat(last).take(extra));
        Self {
            offsets,
            targets: self.targets.clone(),
        }
    }
}
