//! GF(2) parity label algebra and flow tracking.
//!
//! Every physical position `p` carries a label: the set of logical indices
//! whose XOR is currently stored on that wire. A physical `CNOT(c, t)` XORs
//! label `c` into label `t`. The collection of labels is the flow state; as a
//! GF(2) matrix (rows indexed by position, columns by logical index) it stays
//! invertible under CNOTs, and a physical Rz under a weight-2 label enacts a
//! logical ZZ rotation.

use thiserror::Error;

/// A set of logical indices, packed as bit blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParityLabel {
    blocks: Vec<u64>,
}

impl ParityLabel {
    pub fn zero(n: usize) -> Self {
        ParityLabel {
            blocks: vec![0; n.div_ceil(64)],
        }
    }

    pub fn singleton(n: usize, index: usize) -> Self {
        let mut label = Self::zero(n);
        label.flip(index);
        label
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Self {
        let mut label = Self::zero(n);
        for &i in indices {
            label.flip(i);
        }
        label
    }

    pub fn flip(&mut self, index: usize) {
        self.blocks[index / 64] ^= 1 << (index % 64);
    }

    pub fn contains(&self, index: usize) -> bool {
        self.blocks[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn xor_assign(&mut self, other: &ParityLabel) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a ^= b;
        }
    }

    pub fn weight(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (block_index, &block) in self.blocks.iter().enumerate() {
            let mut bits = block;
            while bits != 0 {
                let low = bits.trailing_zeros() as usize;
                out.push(block_index * 64 + low);
                bits &= bits - 1;
            }
        }
        out
    }

    /// The contained index if the label has weight one.
    pub fn as_singleton(&self) -> Option<usize> {
        match self.indices()[..] {
            [i] => Some(i),
            _ => None,
        }
    }

    /// The contained pair if the label has weight two.
    pub fn as_pair(&self) -> Option<(usize, usize)> {
        match self.indices()[..] {
            [i, j] => Some((i, j)),
            _ => None,
        }
    }
}

impl std::fmt::Display for ParityLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("CNOT between positions {c} and {t} is not nearest neighbour")]
    NotAdjacent { c: usize, t: usize },
    #[error("position {position} is out of range for {n} wires")]
    OutOfRange { position: usize, n: usize },
    #[error("flow matrix is singular, which no CNOT replay can produce")]
    Singular,
}

/// Labels of all positions on the chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlowState {
    n: usize,
    rows: Vec<ParityLabel>,
}

impl FlowState {
    pub fn identity(n: usize) -> Self {
        FlowState {
            n,
            rows: (0..n).map(|i| ParityLabel::singleton(n, i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn row(&self, position: usize) -> &ParityLabel {
        &self.rows[position]
    }

    /// Positions whose label contains logical `index`.
    pub fn column(&self, index: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&p| self.rows[p].contains(index))
            .collect()
    }

    /// Applies the label update of a physical `CNOT(c, t)`.
    pub fn apply_cnot(&mut self, c: usize, t: usize) -> Result<(), FlowError> {
        for position in [c, t] {
            if position >= self.n {
                return Err(FlowError::OutOfRange { position, n: self.n });
            }
        }
        if c.abs_diff(t) != 1 {
            return Err(FlowError::NotAdjacent { c, t });
        }
        let (src, dst) = (self.rows[c].clone(), &mut self.rows[t]);
        dst.xor_assign(&src);
        Ok(())
    }

    /// Applies the label update of a physical SWAP.
    pub fn apply_swap(&mut self, a: usize, b: usize) -> Result<(), FlowError> {
        for position in [a, b] {
            if position >= self.n {
                return Err(FlowError::OutOfRange { position, n: self.n });
            }
        }
        if a.abs_diff(b) != 1 {
            return Err(FlowError::NotAdjacent { c: a, t: b });
        }
        self.rows.swap(a, b);
        Ok(())
    }

    pub fn rank(&self) -> usize {
        let mut work: Vec<ParityLabel> = self.rows.clone();
        let mut rank = 0;
        for j in 0..self.n {
            if let Some(pivot) = (rank..self.n).find(|&r| work[r].contains(j)) {
                work.swap(rank, pivot);
                let pivot_row = work[rank].clone();
                for (r, row) in work.iter_mut().enumerate() {
                    if r != rank && row.contains(j) {
                        row.xor_assign(&pivot_row);
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|p| self.rows[p].as_singleton() == Some(p))
    }

    /// If every row is a singleton, returns `layout` with `layout[p]` the
    /// logical index stored at position `p`.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        self.rows.iter().map(ParityLabel::as_singleton).collect()
    }

    /// A spanning line: full rank, every label of weight 1 or 2, every
    /// logical index present somewhere, at least one singleton row.
    pub fn is_spanning_line(&self) -> bool {
        self.rows.iter().all(|r| (1..=2).contains(&r.weight()))
            && self.rows.iter().any(|r| r.weight() == 1)
            && (0..self.n).all(|i| !self.column(i).is_empty())
            && self.rank() == self.n
    }

    /// Position exposing exactly the label `{i}`, if any.
    pub fn find_singleton(&self, i: usize) -> Option<usize> {
        let want = ParityLabel::singleton(self.n, i);
        (0..self.n).find(|&p| self.rows[p] == want)
    }

    /// Position exposing exactly the label `{i, j}`, if any.
    pub fn find_pair(&self, i: usize, j: usize) -> Option<usize> {
        let want = ParityLabel::from_indices(self.n, &[i, j]);
        (0..self.n).find(|&p| self.rows[p] == want)
    }

    /// One line per position, `p: (labels)`.
    pub fn render(&self) -> String {
        (0..self.n)
            .map(|p| format!("{}: {}\n", p, self.rows[p]))
            .collect()
    }

    /// Plans a CNOT sequence that reduces the flow to a bare wire
    /// permutation, plus that final layout.
    ///
    /// Permutations need no gates; spanning lines peel from their singleton
    /// rows; anything else falls back to Gauss elimination with long-range
    /// row additions expanded into nearest-neighbour CNOT ladders. The
    /// fallback exists for replayed ad-hoc circuits; compiled flows always
    /// hit one of the first two tiers.
    pub fn decode_plan(&self) -> Result<DecodePlan, FlowError> {
        if self.rank() != self.n {
            return Err(FlowError::Singular);
        }
        let mut work = self.clone();
        let mut cnots: Vec<(usize, usize)> = Vec::new();

        // Tier 2: peel singletons out of neighbouring rows while possible.
        'peel: loop {
            if let Some(layout) = work.as_permutation() {
                return Ok(DecodePlan { cnots, layout });
            }
            for p in 0..work.n {
                let Some(i) = work.rows[p].as_singleton() else {
                    continue;
                };
                for q in neighbours(p, work.n) {
                    if work.rows[q].weight() == 2 && work.rows[q].contains(i) {
                        work.apply_cnot(p, q)?;
                        cnots.push((p, q));
                        continue 'peel;
                    }
                }
            }
            break;
        }

        // Tier 3: full Gauss-Jordan to the identity. The pivot must come
        // from below the diagonal: rows above it still own their diagonal
        // bit, and adding one of them back would dirty a cleaned column.
        // Rows below the diagonal carry no bits in earlier columns, and
        // invertibility guarantees one of them holds bit j.
        for j in 0..work.n {
            if !work.rows[j].contains(j) {
                let pivot = (j + 1..work.n)
                    .find(|&r| work.rows[r].contains(j))
                    .ok_or(FlowError::Singular)?;
                long_add(pivot, j, &mut work, &mut cnots)?;
            }
            for t in 0..work.n {
                if t != j && work.rows[t].contains(j) {
                    long_add(j, t, &mut work, &mut cnots)?;
                }
            }
        }
        debug_assert!(work.is_identity());
        let layout = work.as_permutation().ok_or(FlowError::Singular)?;
        Ok(DecodePlan { cnots, layout })
    }
}

fn neighbours(p: usize, n: usize) -> impl Iterator<Item = usize> {
    [p.checked_sub(1), if p + 1 < n { Some(p + 1) } else { None }]
        .into_iter()
        .flatten()
}

/// Emits `row[t] ^= row[s]` as nearest-neighbour CNOTs, restoring every
/// intermediate row, by splitting at the midpoint:
/// `add(s,t) = add(m,t) add(s,m) add(m,t) add(s,m)`.
fn long_add(
    s: usize,
    t: usize,
    flow: &mut FlowState,
    out: &mut Vec<(usize, usize)>,
) -> Result<(), FlowError> {
    if s.abs_diff(t) == 1 {
        flow.apply_cnot(s, t)?;
        out.push((s, t));
        return Ok(());
    }
    let m = (s + t) / 2;
    long_add(m, t, flow, out)?;
    long_add(s, m, flow, out)?;
    long_add(m, t, flow, out)?;
    long_add(s, m, flow, out)?;
    Ok(())
}

/// Decode recipe: CNOTs that reduce the flow to a wire permutation, and that
/// residual layout (`layout[p]` = logical index left at position `p`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodePlan {
    pub cnots: Vec<(usize, usize)>,
    pub layout: Vec<usize>,
}

impl DecodePlan {
    pub fn to_circuit(&self, n: usize) -> crate::circuit::Circuit {
        let mut c = crate::circuit::Circuit::new(n);
        for &(src, dst) in &self.cnots {
            c.push(crate::circuit::Gate::Cnot(src, dst));
        }
        c
    }
}

/// Replays the two-qubit structure of a circuit over the flow, returning the
/// final state. Diagonal and single-qubit gates leave labels untouched.
pub fn replay(circuit: &crate::circuit::Circuit) -> Result<FlowState, FlowError> {
    let mut flow = FlowState::identity(circuit.num_qubits);
    for gate in &circuit.gates {
        match *gate {
            crate::circuit::Gate::Cnot(c, t) => flow.apply_cnot(c, t)?,
            crate::circuit::Gate::Swap(a, b) => flow.apply_swap(a, b)?,
            _ => {}
        }
    }
    Ok(flow)
}
