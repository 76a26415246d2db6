//! The `N x N` square grid, its box partition and cycle instances on it.
//!
//! Vertex `(r, c)` has id `r * N + c`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SptoError};
use crate::game::{GameInstance, Transcript};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Grid {
        Grid { n }
    }

    pub fn vertices(&self) -> usize {
        self.n * self.n
    }

    pub fn id(&self, r: usize, c: usize) -> usize {
        r * self.n + c
    }

    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v / self.n, v % self.n)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        let ((r1, c1), (r2, c2)) = (self.coords(u), self.coords(v));
        r1.abs_diff(r2) + c1.abs_diff(c2) == 1
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let (r, c) = self.coords(v);
        let n = self.n;
        [
            (r.wrapping_sub(1), c),
            (r + 1, c),
            (r, c.wrapping_sub(1)),
            (r, c + 1),
        ]
        .into_iter()
        .filter(move |&(r, c)| r < n && c < n)
        .map(move |(r, c)| r * n + c)
    }

    /// Shortest path from `from` to `to` avoiding `blocked` vertices
    /// (neighbors are tried in the order up, down, left, right).
    pub fn bfs_path(&self, from: usize, to: usize, blocked: &[bool]) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.vertices()];
        let mut queue = VecDeque::from([from]);
        prev[from] = from;
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for w in self.neighbors(v) {
                if prev[w] == usize::MAX && (!blocked[w] || w == to) {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Staircase path: vertical move by `offset` rows (clamped to the grid),
    /// then horizontal to the target column, then vertical to the target row.
    /// With `offset = 0` this is the horizontal-then-vertical L.
    pub fn l_path(&self, from: usize, to: usize, offset: isize) -> Vec<usize> {
        let (r0, c0) = self.coords(from);
        let (r1, c1) = self.coords(to);
        let turn = (r0 as isize + offset).clamp(0, self.n as isize - 1) as usize;
        let mut path = vec![from];
        let (mut r, mut c) = (r0, c0);
        let mut step_to = |tr: usize, tc: usize, path: &mut Vec<usize>| {
            while (r, c) != (tr, tc) {
                if r != tr {
                    r = if tr > r { r + 1 } else { r - 1 };
                } else {
                    c = if tc > c { c + 1 } else { c - 1 };
                }
                path.push(r * self.n + c);
            }
        };
        step_to(turn, c0, &mut path);
        step_to(turn, c1, &mut path);
        step_to(r1, c1, &mut path);
        path
    }
}

/// Tiling of the grid by square boxes of side `ceil(N^(2/3))`, boxes numbered
/// row-major. Boxes in the last row or column may be smaller.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodPartition {
    pub n: usize,
    pub side: usize,
    pub boxes_per_row: usize,
    pub box_of: Vec<usize>,
}

/// Smallest `s` with `s^3 >= n^2`.
pub fn box_side(n: usize) -> usize {
    let target = (n as u128).pow(2);
    let mut s = (n as f64).powf(2.0 / 3.0).floor().max(1.0) as u128;
    while s.pow(3) < target {
        s += 1;
    }
    while s > 1 && (s - 1).pow(3) >= target {
        s -= 1;
    }
    s as usize
}

pub fn partition_neighborhoods(n: usize) -> Result<NeighborhoodPartition> {
    if n < 8 {
        return Err(SptoError::OutOfRange(format!("grid side {n} < 8")));
    }
    let side = box_side(n);
    let boxes_per_row = n.div_ceil(side);
    let box_of = (0..n * n)
        .map(|v| (v / n / side) * boxes_per_row + (v % n) / side)
        .collect();
    Ok(NeighborhoodPartition {
        n,
        side,
        boxes_per_row,
        box_of,
    })
}

impl NeighborhoodPartition {
    pub fn box_count(&self) -> usize {
        self.boxes_per_row * self.boxes_per_row
    }

    /// `(top row, left column, height, width)` of a box.
    pub fn box_rect(&self, b: usize) -> (usize, usize, usize, usize) {
        let (br, bc) = (b / self.boxes_per_row, b % self.boxes_per_row);
        let (r0, c0) = (br * self.side, bc * self.side);
        (
            r0,
            c0,
            self.side.min(self.n - r0),
            self.side.min(self.n - c0),
        )
    }

    pub fn box_size(&self, b: usize) -> usize {
        let (_, _, h, w) = self.box_rect(b);
        h * w
    }

    pub fn members(&self, b: usize) -> Vec<usize> {
        let (r0, c0, h, w) = self.box_rect(b);
        (r0..r0 + h)
            .flat_map(|r| (c0..c0 + w).map(move |c| r * self.n + c))
            .collect()
    }
}

/// A triangle-game instance on the grid: corners are vertices and the players
/// are the vertices of the cycle, in cycle order starting at `alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridInstance {
    pub n: usize,
    /// Vertex ids of `alpha`, `beta`, `gamma`.
    pub corners: [usize; 3],
    pub cycle: Vec<usize>,
    /// Inputs at `alpha`, `beta`, `gamma`.
    pub x: [u8; 3],
}

impl GridInstance {
    pub fn new(
        n: usize,
        corners: [usize; 3],
        cycle: Vec<usize>,
        x: [u8; 3],
    ) -> Result<GridInstance> {
        let inst = GridInstance {
            n,
            corners,
            cycle,
            x,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.n)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SptoError::InvalidInstance(m));
        let g = self.grid();
        let len = self.cycle.len();
        if len < 4 {
            return bad(format!("cycle of length {len}"));
        }
        let mut seen = vec![false; g.vertices()];
        for &v in &self.cycle {
            if v >= g.vertices() {
                return bad(format!("vertex {v} outside the {0}x{0} grid", self.n));
            }
            if seen[v] {
                return bad(format!("cycle revisits vertex {v}"));
            }
            seen[v] = true;
        }
        for i in 0..len {
            if !g.adjacent(self.cycle[i], self.cycle[(i + 1) % len]) {
                return bad(format!(
                    "cycle steps {} -> {} are not grid edges",
                    self.cycle[i],
                    self.cycle[(i + 1) % len]
                ));
            }
        }
        if self.cycle[0] != self.corners[0] {
            return bad("cycle must start at alpha".into());
        }
        let [_, pb, pg] = self.positions()?;
        if !(0 < pb && pb < pg) {
            return bad("corners must appear in the order alpha, beta, gamma".into());
        }
        if self.x.iter().any(|&b| b > 1) {
            return bad(format!("inputs {:?} are not bits", self.x));
        }
        Ok(())
    }

    /// Cycle positions of the three corners.
    pub fn positions(&self) -> Result<[usize; 3]> {
        let mut out = [0; 3];
        for (o, c) in out.iter_mut().zip(self.corners) {
            *o = self.cycle.iter().position(|&v| v == c).ok_or_else(|| {
                SptoError::InvalidInstance(format!("corner {c} is not on the cycle"))
            })?;
        }
        Ok(out)
    }

    /// `Gamma_ab`, `Gamma_bg` and `Gamma_ga`, each including both end corners.
    pub fn paths(&self) -> [Vec<usize>; 3] {
        let [_, pb, pg] = self.positions().expect("validated instance");
        let ab = self.cycle[..=pb].to_vec();
        let bg = self.cycle[pb..=pg].to_vec();
        let mut ga = self.cycle[pg..].to_vec();
        ga.push(self.cycle[0]);
        [ab, bg, ga]
    }

    /// The same geometry with other corner inputs.
    pub fn with_inputs(&self, x: [u8; 3]) -> GridInstance {
        GridInstance { x, ..self.clone() }
    }

    /// The eight instances of this geometry, inputs in order 000..111.
    pub fn family(&self) -> Vec<GridInstance> {
        crate::game::input_patterns()
            .into_iter()
            .map(|x| self.with_inputs(x))
            .collect()
    }

    /// Input bit per grid vertex.
    pub fn vertex_inputs(&self) -> Vec<u8> {
        let mut x = vec![0u8; self.n * self.n];
        for (c, b) in self.corners.iter().zip(self.x) {
            x[*c] = b;
        }
        x
    }

    pub fn game_instance(&self) -> Result<GameInstance> {
        let pos = self.positions()?;
        GameInstance::with_corner_bits(self.cycle.len(), pos, self.x)
    }

    /// Reads the players' answers off per-vertex answers.
    pub fn transcript(&self, answers: &[[u8; 3]]) -> Transcript {
        Transcript {
            y: self.cycle.iter().map(|&v| answers[v]).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<GridInstance> {
        let inst: GridInstance = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Joins three corner-to-corner paths into a cycle, or `None` if they cross.
fn join(paths: [&[usize]; 3], vertices: usize) -> Option<Vec<usize>> {
    let mut cycle = Vec::new();
    let mut seen = vec![false; vertices];
    for p in paths {
        for &v in &p[..p.len() - 1] {
            if std::mem::replace(&mut seen[v], true) {
                return None;
            }
            cycle.push(v);
        }
    }
    (cycle.len() >= 4).then_some(cycle)
}

fn bfs_cycle(grid: &Grid, order: [usize; 3], halo: bool) -> Option<Vec<usize>> {
    let [a, b, c] = order;
    let mut blocked = vec![false; grid.vertices()];
    blocked[c] = true;
    if halo {
        for w in grid.neighbors(c) {
            blocked[w] = true;
        }
    }
    let p1 = grid.bfs_path(a, b, &blocked)?;
    let mut blocked = vec![false; grid.vertices()];
    for &v in &p1 {
        blocked[v] = true;
    }
    let p2 = grid.bfs_path(b, c, &blocked)?;
    for &v in &p2 {
        blocked[v] = true;
    }
    blocked[a] = false;
    let p3 = grid.bfs_path(c, a, &blocked)?;
    join([&p1, &p2, &p3], grid.vertices())
}

/// Rotates and orients a cycle through the corners so that it starts at the
/// smallest corner id and visits the other two in increasing id order.
fn orient(mut cycle: Vec<usize>, corners: [usize; 3]) -> Option<(Vec<usize>, [usize; 3])> {
    let mut cs = corners;
    cs.sort_unstable();
    let start = cycle.iter().position(|&v| v == cs[0])?;
    cycle.rotate_left(start);
    let pos = |cy: &[usize], v: usize| cy.iter().position(|&w| w == v);
    if pos(&cycle, cs[1])? > pos(&cycle, cs[2])? {
        cycle[1..].reverse();
    }
    Some((cycle, cs))
}

/// Simple cycle through three distinct vertices: staircase paths with the
/// given offsets (both turning orders), falling back to breadth-first search.
pub fn cycle_through(
    grid: &Grid,
    corners: [usize; 3],
    offsets: [isize; 3],
) -> Option<(Vec<usize>, [usize; 3])> {
    let [a, b, c] = corners;
    if a == b || b == c || a == c {
        return None;
    }
    let pairs = [(a, b), (b, c), (c, a)];
    for flips in 0..8u8 {
        let paths: Vec<Vec<usize>> = pairs
            .iter()
            .zip(offsets)
            .enumerate()
            .map(|(i, (&(s, t), o))| {
                if flips >> i & 1 == 0 {
                    grid.l_path(s, t, o)
                } else {
                    let mut p = grid.l_path(t, s, o);
                    p.reverse();
                    p
                }
            })
            .collect();
        if let Some(cy) = join([&paths[0], &paths[1], &paths[2]], grid.vertices()) {
            return orient(cy, corners);
        }
    }
    for halo in [true, false] {
        for order in [
            [a, b, c],
            [b, c, a],
            [c, a, b],
            [a, c, b],
            [c, b, a],
            [b, a, c],
        ] {
            if let Some(cy) = bfs_cycle(grid, order, halo) {
                return orient(cy, corners);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_sides() {
        assert_eq!(box_side(27), 9);
        assert_eq!(box_side(8), 4);
        assert_eq!(box_side(64), 16);
        assert_eq!(box_side(10), 5);
    }

    #[test]
    fn partition_of_27() {
        let p = partition_neighborhoods(27).unwrap();
        assert_eq!(p.side, 9);
        assert_eq!(p.box_count(), 9);
        assert!((0..9).all(|b| p.box_size(b) == 81));
    }

    #[test]
    fn partition_of_8() {
        let p = partition_neighborhoods(8).unwrap();
        assert_eq!((p.side, p.box_count()), (4, 4));
        assert!(partition_neighborhoods(7).is_err());
    }

    #[test]
    fn partition_covers_once() {
        for n in [8, 10, 27, 30] {
            let p = partition_neighborhoods(n).unwrap();
            let mut hits = vec![0; n * n];
            for b in 0..p.box_count() {
                for v in p.members(b) {
                    hits[v] += 1;
                    assert_eq!(p.box_of[v], b);
                }
            }
            assert!(hits.iter().all(|&h| h == 1));
        }
    }

    #[test]
    fn l_path_shape() {
        let g = Grid::new(5);
        assert_eq!(g.l_path(g.id(0, 0), g.id(2, 2), 0), vec![0, 1, 2, 7, 12]);
        assert_eq!(g.l_path(g.id(1, 0), g.id(1, 2), -1), vec![5, 0, 1, 2, 7]);
    }

    #[test]
    fn cycle_through_three_points() {
        let g = Grid::new(8);
        let (cy, cs) = cycle_through(&g, [g.id(6, 1), g.id(1, 1), g.id(3, 6)], [0, 0, 0]).unwrap();
        let inst = GridInstance::new(8, cs, cy, [1, 0, 1]).unwrap();
        let game = inst.game_instance().unwrap();
        assert_eq!(game.n, inst.cycle.len());
        assert_eq!(game.x.iter().filter(|&&b| b == 1).count(), 2);
    }

    #[test]
    fn invalid_cycles_are_rejected() {
        let g = Grid::new(8);
        let square = vec![g.id(0, 0), g.id(0, 1), g.id(1, 1), g.id(1, 0)];
        assert!(GridInstance::new(8, [0, 1, 9], square.clone(), [0; 3]).is_ok());
        assert!(GridInstance::new(8, [0, 9, 1], square.clone(), [0; 3]).is_err());
        let mut broken = square;
        broken.swap(1, 2);
        assert!(GridInstance::new(8, [0, 9, 1], broken, [0; 3]).is_err());
    }
}
