//! Ordered partitions and equitable refinement by neighbor counts.

use std::collections::VecDeque;

use super::ColoredGraph;

#[derive(Clone, Debug)]
pub(crate) struct Partition {
    /// position -> vertex
    pub elems: Vec<u32>,
    /// vertex -> position
    pub pos: Vec<u32>,
    /// vertex -> start of its cell
    pub cell: Vec<u32>,
    /// cell start -> cell length (meaningful at cell starts only)
    pub len: Vec<u32>,
    pub cells: usize,
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    (h.rotate_left(5) ^ x).wrapping_mul(0x517c_c1b7_2722_0a95)
}

impl Partition {
    /// Cells ordered by color value.
    pub fn from_colors(colors: &[u32]) -> Partition {
        let n = colors.len();
        let mut elems: Vec<u32> = (0..n as u32).collect();
        elems.sort_by_key(|&v| (colors[v as usize], v));
        let mut pos = vec![0; n];
        let mut cell = vec![0; n];
        let mut len = vec![0; n];
        let mut cells = 0;
        let mut start = 0;
        for i in 0..n {
            let v = elems[i] as usize;
            pos[v] = i as u32;
            if i > 0 && colors[v] != colors[elems[i - 1] as usize] {
                len[start] = (i - start) as u32;
                start = i;
            }
            if i == start {
                cells += 1;
            }
            cell[v] = start as u32;
        }
        if n > 0 {
            len[start] = (n - start) as u32;
        }
        Partition { elems, pos, cell, len, cells }
    }

    pub fn is_discrete(&self) -> bool {
        self.cells == self.elems.len()
    }

    pub fn cell_starts(&self) -> impl Iterator<Item = u32> + '_ {
        let mut i = 0usize;
        std::iter::from_fn(move || {
            if i >= self.elems.len() {
                return None;
            }
            let s = i;
            i += self.len[s] as usize;
            Some(s as u32)
        })
    }

    pub fn cell_elems(&self, start: u32) -> &[u32] {
        let s = start as usize;
        &self.elems[s..s + self.len[s] as usize]
    }

    /// First largest non-singleton cell.
    pub fn target_cell(&self) -> Option<u32> {
        let mut best: Option<(u32, u32)> = None;
        for s in self.cell_starts() {
            let l = self.len[s as usize];
            if l > 1 && best.is_none_or(|(_, bl)| l > bl) {
                best = Some((s, l));
            }
        }
        best.map(|(s, _)| s)
    }
}

/// Scratch space reused across refinements of one graph.
pub(crate) struct Refiner {
    count: Vec<u32>,
    touched: Vec<u32>,
    cell_touched: Vec<u32>,
    touched_cells: Vec<u32>,
    in_queue: Vec<bool>,
    queue: VecDeque<u32>,
}

impl Refiner {
    pub fn new(n: usize) -> Refiner {
        Refiner {
            count: vec![0; n],
            touched: Vec::new(),
            cell_touched: vec![0; n],
            touched_cells: Vec::new(),
            in_queue: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    /// Refine using every cell as a splitter; returns the trace hash.
    pub fn refine_all(&mut self, g: &ColoredGraph, p: &mut Partition) -> u64 {
        let starts: Vec<u32> = p.cell_starts().collect();
        let mut h = mix(0, p.cells as u64);
        for &s in &starts {
            h = mix(h, p.len[s as usize] as u64);
        }
        h ^ self.refine(g, p, &starts)
    }

    /// Split `v` off the front of its cell and refine. Returns the trace hash.
    pub fn individualize(&mut self, g: &ColoredGraph, p: &mut Partition, v: u32) -> u64 {
        let c = p.cell[v as usize] as usize;
        let l = p.len[c] as usize;
        debug_assert!(l > 1);
        let pv = p.pos[v as usize] as usize;
        let other = p.elems[c];
        p.elems.swap(c, pv);
        p.pos[other as usize] = pv as u32;
        p.pos[v as usize] = c as u32;
        p.len[c] = 1;
        p.len[c + 1] = (l - 1) as u32;
        for i in c + 1..c + l {
            p.cell[p.elems[i] as usize] = (c + 1) as u32;
        }
        p.cells += 1;
        mix(c as u64, l as u64) ^ self.refine(g, p, &[c as u32])
    }

    fn refine(&mut self, g: &ColoredGraph, p: &mut Partition, splitters: &[u32]) -> u64 {
        let mut trace = 0u64;
        for &s in splitters {
            self.in_queue[s as usize] = true;
            self.queue.push_back(s);
        }
        let n = p.elems.len();
        while let Some(w) = self.queue.pop_front() {
            self.in_queue[w as usize] = false;
            if p.cells == n {
                continue;
            }
            let ws = w as usize;
            let wl = p.len[ws] as usize;
            for i in ws..ws + wl {
                let v = p.elems[i];
                for &nb in g.neighbors(v) {
                    if self.count[nb as usize] == 0 {
                        self.touched.push(nb);
                        let c = p.cell[nb as usize];
                        if self.cell_touched[c as usize] == 0 {
                            self.touched_cells.push(c);
                        }
                        self.cell_touched[c as usize] += 1;
                    }
                    self.count[nb as usize] += 1;
                }
            }
            trace = mix(trace, ws as u64);
            self.touched_cells.sort_unstable();
            let touched_cells = std::mem::take(&mut self.touched_cells);
            for &c in &touched_cells {
                let cs = c as usize;
                let cl = p.len[cs] as usize;
                let hit = self.cell_touched[cs] as usize;
                self.cell_touched[cs] = 0;
                if cl == 1 {
                    trace = mix(trace, mix(cs as u64, self.count[p.elems[cs] as usize] as u64));
                    continue;
                }
                if hit == cl {
                    let c0 = self.count[p.elems[cs] as usize];
                    if p.elems[cs..cs + cl].iter().all(|&v| self.count[v as usize] == c0) {
                        trace = mix(trace, mix(cs as u64, c0 as u64));
                        continue;
                    }
                }
                let count = &self.count;
                p.elems[cs..cs + cl].sort_unstable_by_key(|&v| count[v as usize]);
                // carve out the runs of equal count
                let mut parts: Vec<(usize, usize)> = Vec::new();
                let mut start = cs;
                for i in cs + 1..=cs + cl {
                    if i == cs + cl || count[p.elems[i] as usize] != count[p.elems[start] as usize] {
                        parts.push((start, i - start));
                        start = i;
                    }
                }
                trace = mix(trace, mix(cs as u64, parts.len() as u64));
                for &(s, l) in &parts {
                    trace = mix(trace, mix(count[p.elems[s] as usize] as u64, l as u64));
                    p.len[s] = l as u32;
                    for i in s..s + l {
                        let v = p.elems[i] as usize;
                        p.pos[v] = i as u32;
                        p.cell[v] = s as u32;
                    }
                }
                p.cells += parts.len() - 1;
                if self.in_queue[cs] {
                    for &(s, _) in &parts[1..] {
                        self.in_queue[s] = true;
                        self.queue.push_back(s as u32);
                    }
                } else {
                    let largest = parts
                        .iter()
                        .enumerate()
                        .fold(0, |bi, (i, &(_, l))| if l > parts[bi].1 { i } else { bi });
                    for (i, &(s, _)) in parts.iter().enumerate() {
                        if i != largest {
                            self.in_queue[s] = true;
                            self.queue.push_back(s as u32);
                        }
                    }
                }
            }
            self.touched_cells = touched_cells;
            self.touched_cells.clear();
            for &v in &self.touched {
                self.count[v as usize] = 0;
            }
            self.touched.clear();
        }
        trace
    }
}
