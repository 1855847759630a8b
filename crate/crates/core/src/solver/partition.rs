//! Ordered partitions and equitable refinement with coloured edges.
//!
//! Cells are identified by the position of their first element, which is
//! invariant under relabelling of the graph. Refinement is splitter-driven:
//! a splitter cell `W` and an edge colour `c` split every cell by the number
//! of `c`-coloured neighbours its vertices have in `W`. Fragments are
//! ordered by that count, so the result depends only on the isomorphism
//! class of `(graph, partition)`.

use std::collections::VecDeque;

use super::ColouredGraph;

/// Public, owned view of an ordered partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedPartition {
    pub cells: Vec<Vec<usize>>,
}

impl OrderedPartition {
    /// A single cell holding every vertex.
    pub fn unit(n: usize) -> Self {
        OrderedPartition {
            cells: if n == 0 { vec![] } else { vec![(0..n).collect()] },
        }
    }

    pub fn discrete(n: usize) -> Self {
        OrderedPartition {
            cells: (0..n).map(|v| vec![v]).collect(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 1)
    }

    /// Cells are non-empty, disjoint and cover `0..n`.
    pub fn is_valid(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for cell in &self.cells {
            if cell.is_empty() {
                return false;
            }
            for &v in cell {
                if v >= n || seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Every cell of `self` lies inside some cell of `coarser`.
    pub fn refines(&self, coarser: &OrderedPartition) -> bool {
        let n = coarser.num_vertices();
        let mut owner = vec![usize::MAX; n];
        for (i, cell) in coarser.cells.iter().enumerate() {
            for &v in cell {
                owner[v] = i;
            }
        }
        self.cells.iter().all(|cell| {
            let o = owner[cell[0]];
            cell.iter().all(|&v| owner[v] == o)
        })
    }

    /// Every vertex of a cell has the same number of `c`-coloured neighbours
    /// in every cell, for every edge colour `c`.
    pub fn is_equitable(&self, g: &ColouredGraph) -> bool {
        let n = g.num_vertices();
        let mut owner = vec![0; n];
        for (i, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                owner[v] = i;
            }
        }
        let profile = |v: usize| {
            let mut p: Vec<(usize, u8)> = g.neighbours(v).iter().map(|&(w, c)| (owner[w], c)).collect();
            p.sort_unstable();
            p
        };
        self.cells.iter().all(|cell| {
            let first = profile(cell[0]);
            cell.iter().skip(1).all(|&v| profile(v) == first)
        })
    }
}

/// Working partition used during search.
#[derive(Debug, Clone)]
pub(crate) struct CellPartition {
    elems: Vec<usize>,
    pos: Vec<usize>,
    /// Start position of the cell containing each vertex.
    cell_of: Vec<usize>,
    /// Cell length, valid at cell start positions.
    cell_len: Vec<usize>,
    num_cells: usize,
}

impl CellPartition {
    /// Partition whose cells are given in order; all cells start as splitters.
    pub(crate) fn from_cells(n: usize, cells: &[Vec<usize>]) -> (Self, Vec<usize>) {
        let mut p = CellPartition {
            elems: Vec::with_capacity(n),
            pos: vec![0; n],
            cell_of: vec![0; n],
            cell_len: vec![0; n],
            num_cells: 0,
        };
        let mut starts = Vec::with_capacity(cells.len());
        for cell in cells {
            let start = p.elems.len();
            starts.push(start);
            p.cell_len[start] = cell.len();
            p.num_cells += 1;
            for &v in cell {
                p.pos[v] = p.elems.len();
                p.cell_of[v] = start;
                p.elems.push(v);
            }
        }
        (p, starts)
    }

    pub(crate) fn is_discrete(&self) -> bool {
        self.num_cells == self.elems.len()
    }

    /// Cell lengths in cell order.
    pub(crate) fn cell_sizes(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.num_cells);
        let mut s = 0;
        while s < self.elems.len() {
            out.push(self.cell_len[s]);
            s += self.cell_len[s];
        }
        out
    }

    pub(crate) fn cells(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.num_cells);
        let mut s = 0;
        while s < self.elems.len() {
            out.push(self.elems[s..s + self.cell_len[s]].to_vec());
            s += self.cell_len[s];
        }
        out
    }

    /// Cells in order, each listed in increasing vertex order.
    pub(crate) fn to_ordered(&self) -> OrderedPartition {
        let mut cells = self.cells();
        for cell in &mut cells {
            cell.sort_unstable();
        }
        OrderedPartition { cells }
    }

    /// First non-singleton cell of minimum size, as `(start, len)`.
    pub(crate) fn target_cell(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut s = 0;
        while s < self.elems.len() {
            let len = self.cell_len[s];
            if len > 1 && best.is_none_or(|(_, l)| len < l) {
                best = Some((s, len));
            }
            s += len;
        }
        best
    }

    pub(crate) fn cell_members(&self, start: usize) -> &[usize] {
        &self.elems[start..start + self.cell_len[start]]
    }

    /// For a discrete partition: vertex ↦ label (its position).
    pub(crate) fn labelling(&self) -> Vec<usize> {
        debug_assert!(self.is_discrete());
        self.pos.clone()
    }

    fn swap_positions(&mut self, i: usize, j: usize) {
        self.elems.swap(i, j);
        self.pos[self.elems[i]] = i;
        self.pos[self.elems[j]] = j;
    }

    /// Splits `{v}` off the front of its cell and returns the new singleton's
    /// start, which is the only splitter needed if the partition was equitable.
    pub(crate) fn individualise(&mut self, v: usize) -> usize {
        let s = self.cell_of[v];
        let len = self.cell_len[s];
        debug_assert!(len > 1);
        self.swap_positions(s, self.pos[v]);
        self.cell_len[s] = 1;
        self.cell_len[s + 1] = len - 1;
        for k in s + 1..s + len {
            self.cell_of[self.elems[k]] = s + 1;
        }
        self.num_cells += 1;
        s
    }

    /// Refines to the coarsest equitable partition finer than `self`,
    /// starting from the given splitter cells.
    pub(crate) fn refine(&mut self, g: &ColouredGraph, splitters: &[usize], work: &mut RefineWork) {
        let n = self.elems.len();
        work.ensure(n);
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in splitters {
            if !work.in_queue[s] {
                work.in_queue[s] = true;
                queue.push_back(s);
            }
        }
        let colours = g.num_edge_colours();
        while let Some(w) = queue.pop_front() {
            work.in_queue[w] = false;
            if self.is_discrete() {
                continue;
            }
            let splitter: Vec<usize> = self.cell_members(w).to_vec();
            for colour in 0..colours {
                self.split_by(g, &splitter, colour, work, &mut queue);
            }
        }
        for s in queue {
            work.in_queue[s] = false;
        }
    }

    fn split_by(
        &mut self,
        g: &ColouredGraph,
        splitter: &[usize],
        colour: u8,
        work: &mut RefineWork,
        queue: &mut VecDeque<usize>,
    ) {
        work.touched.clear();
        for &x in splitter {
            for &(u, c) in g.neighbours(x) {
                if c == colour {
                    if work.count[u] == 0 {
                        work.touched.push(u);
                    }
                    work.count[u] += 1;
                }
            }
        }
        if work.touched.is_empty() {
            return;
        }
        let mut touched = std::mem::take(&mut work.touched);
        touched.sort_unstable_by_key(|&u| (self.cell_of[u], work.count[u]));
        let mut i = 0;
        while i < touched.len() {
            let s = self.cell_of[touched[i]];
            let mut j = i;
            while j < touched.len() && self.cell_of[touched[j]] == s {
                j += 1;
            }
            self.split_cell(s, &touched[i..j], work, queue);
            i = j;
        }
        for &u in &touched {
            work.count[u] = 0;
        }
        work.touched = touched;
    }

    /// `members` are the touched vertices of cell `s`, sorted by count.
    fn split_cell(&mut self, s: usize, members: &[usize], work: &mut RefineWork, queue: &mut VecDeque<usize>) {
        let len = self.cell_len[s];
        if len == 1 {
            return;
        }
        let all_touched = members.len() == len;
        let uniform = work.count[members[0]] == work.count[members[members.len() - 1]];
        if all_touched && uniform {
            return;
        }
        // untouched vertices (count 0) keep the front; touched ones go to the
        // back in ascending count order
        let end = s + len;
        let boundary = end - members.len();
        for (k, &u) in members.iter().enumerate() {
            let target = boundary + k;
            let from = self.pos[u];
            self.swap_positions(from, target);
        }
        // positions `boundary..end` now hold `members` in order
        let mut fragments: Vec<(usize, usize)> = Vec::new();
        if boundary > s {
            fragments.push((s, boundary - s));
        }
        let mut k = 0;
        while k < members.len() {
            let c = work.count[members[k]];
            let mut l = k;
            while l < members.len() && work.count[members[l]] == c {
                l += 1;
            }
            fragments.push((boundary + k, l - k));
            k = l;
        }
        if fragments.len() == 1 {
            return;
        }
        for &(start, flen) in &fragments[1..] {
            self.cell_len[start] = flen;
            for p in start..start + flen {
                self.cell_of[self.elems[p]] = start;
            }
        }
        self.cell_len[s] = fragments[0].1;
        self.num_cells += fragments.len() - 1;

        if work.in_queue[s] {
            for &(start, _) in &fragments[1..] {
                work.in_queue[start] = true;
                queue.push_back(start);
            }
        } else {
            let mut largest = 0;
            for (i, &(_, flen)) in fragments.iter().enumerate() {
                if flen > fragments[largest].1 {
                    largest = i;
                }
            }
            for (i, &(start, _)) in fragments.iter().enumerate() {
                if i != largest {
                    work.in_queue[start] = true;
                    queue.push_back(start);
                }
            }
        }
    }
}

/// Scratch buffers reused across refinements.
#[derive(Debug, Default)]
pub(crate) struct RefineWork {
    count: Vec<usize>,
    in_queue: Vec<bool>,
    touched: Vec<usize>,
}

impl RefineWork {
    fn ensure(&mut self, n: usize) {
        if self.count.len() < n {
            self.count.resize(n, 0);
            self.in_queue.resize(n, false);
        }
    }
}

/// Splits every cell of `p` by vertex colour (ascending) and refines the
/// result to an equitable partition.
pub fn refine(g: &ColouredGraph, p: &OrderedPartition) -> OrderedPartition {
    let (mut cp, starts) = CellPartition::from_cells(g.num_vertices(), &split_by_colour(g, &p.cells));
    cp.refine(g, &starts, &mut RefineWork::default());
    cp.to_ordered()
}

pub(crate) fn split_by_colour(g: &ColouredGraph, cells: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for cell in cells {
        let mut sorted = cell.clone();
        sorted.sort_by_key(|&v| (g.colour(v), v));
        let mut i = 0;
        while i < sorted.len() {
            let c = g.colour(sorted[i]);
            let mut j = i;
            while j < sorted.len() && g.colour(sorted[j]) == c {
                j += 1;
            }
            out.push(sorted[i..j].to_vec());
            i = j;
        }
    }
    out
}
