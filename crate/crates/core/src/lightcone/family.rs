//! The hard-instance family on the grid.
//!
//! A geometry is a triple of distinct boxes, one in-box offset shared by the
//! three corners, and one staircase offset per connecting path. Each geometry
//! carries the eight corner-input strings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::{
    cycle_through, partition_neighborhoods, Grid, GridInstance, NeighborhoodPartition,
};
use crate::error::{Result, SptoError};
use crate::game::input_patterns;

#[derive(Clone, Debug)]
pub struct HardFamily {
    pub partition: NeighborhoodPartition,
    pub paths_per_pair: usize,
    triples: Vec<([usize; 3], usize, usize)>,
    prefix: Vec<u64>,
}

/// Staircase offsets `0, 1, -1, 2, -2, ...`.
pub fn path_offset(t: usize) -> isize {
    let k = t.div_ceil(2) as isize;
    if t % 2 == 1 {
        k
    } else {
        -k
    }
}

impl HardFamily {
    pub fn new(n: usize, paths_per_pair: usize) -> Result<HardFamily> {
        if paths_per_pair == 0 {
            return Err(SptoError::OutOfRange(
                "paths_per_pair must be at least 1".into(),
            ));
        }
        let partition = partition_neighborhoods(n)?;
        let nb = partition.box_count();
        let mut triples = Vec::new();
        let mut prefix = vec![0u64];
        for a in 0..nb {
            for b in a + 1..nb {
                for c in b + 1..nb {
                    let rects = [a, b, c].map(|x| partition.box_rect(x));
                    let h = rects.iter().map(|r| r.2).min().unwrap_or(0);
                    let w = rects.iter().map(|r| r.3).min().unwrap_or(0);
                    triples.push(([a, b, c], h, w));
                    prefix.push(prefix.last().unwrap() + (h * w) as u64);
                }
            }
        }
        Ok(HardFamily {
            partition,
            paths_per_pair,
            triples,
            prefix,
        })
    }

    /// Default family: as many path choices per pair as the box side.
    pub fn standard(n: usize) -> Result<HardFamily> {
        let side = partition_neighborhoods(n)?.side;
        HardFamily::new(n, side)
    }

    pub fn n(&self) -> usize {
        self.partition.n
    }

    /// Corner triples: box triples times shared in-box offsets.
    pub fn corner_triples(&self) -> u64 {
        *self.prefix.last().unwrap()
    }

    pub fn geometry_count(&self) -> u64 {
        self.corner_triples() * (self.paths_per_pair as u64).pow(3)
    }

    pub fn instance_count(&self) -> u64 {
        self.geometry_count() * 8
    }

    /// Corner vertices of a corner-triple index.
    pub fn corners(&self, index: u64) -> [usize; 3] {
        let t = self.prefix.partition_point(|&p| p <= index) - 1;
        let (boxes, _, w) = self.triples[t];
        let local = (index - self.prefix[t]) as usize;
        let (dr, dc) = (local / w, local % w);
        boxes.map(|b| {
            let (r0, c0, _, _) = self.partition.box_rect(b);
            (r0 + dr) * self.n() + c0 + dc
        })
    }

    /// Geometry `index` with all-zero inputs.
    pub fn geometry(&self, index: u64) -> Result<GridInstance> {
        if index >= self.geometry_count() {
            return Err(SptoError::OutOfRange(format!(
                "geometry {index} of {}",
                self.geometry_count()
            )));
        }
        let p = self.paths_per_pair as u64;
        let mut rest = index % p.pow(3);
        let corners = self.corners(index / p.pow(3));
        let mut offsets = [0isize; 3];
        for o in offsets.iter_mut().rev() {
            *o = path_offset((rest % p) as usize);
            rest /= p;
        }
        let grid = Grid::new(self.n());
        let (cycle, corners) = cycle_through(&grid, corners, offsets).ok_or_else(|| {
            SptoError::InvalidInstance(format!("no cycle through corners {corners:?}"))
        })?;
        GridInstance::new(self.n(), corners, cycle, [0; 3])
    }

    /// Instance `index`: geometry `index / 8` with input pattern `index % 8`.
    pub fn instance(&self, index: u64) -> Result<GridInstance> {
        let g = self.geometry(index / 8)?;
        Ok(g.with_inputs(input_patterns()[(index % 8) as usize]))
    }

    /// Every instance in index order.
    pub fn enumerate(&self) -> impl Iterator<Item = Result<GridInstance>> + '_ {
        (0..self.geometry_count()).flat_map(move |g| {
            let geo = self.geometry(g);
            input_patterns()
                .into_iter()
                .map(move |x| geo.as_ref().map(|i| i.with_inputs(x)).map_err(clone_err))
        })
    }

    /// `budget` instances: uniformly drawn geometries, each with its eight inputs.
    pub fn sample(&self, budget: usize, seed: u64) -> impl Iterator<Item = GridInstance> + '_ {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let total = self.geometry_count();
        std::iter::from_fn(move || Some(rng.random_range(0..total)))
            .filter_map(move |g| self.geometry(g).ok())
            .flat_map(|geo| input_patterns().map(|x| geo.with_inputs(x)))
            .take(budget)
    }
}

fn clone_err(e: &SptoError) -> SptoError {
    SptoError::InvalidInstance(e.to_string())
}

/// Seeded stream of hard instances on the `n x n` grid.
pub fn generate_hard_instances(n: usize, budget: usize, seed: u64) -> Result<Vec<GridInstance>> {
    if budget == 0 {
        return Ok(Vec::new());
    }
    let family = HardFamily::standard(n)?;
    Ok(family.sample(budget, seed).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_alternate() {
        assert_eq!(
            (0..5).map(path_offset).collect::<Vec<_>>(),
            vec![0, 1, -1, 2, -2]
        );
    }

    #[test]
    fn counts_for_27() {
        let f = HardFamily::new(27, 1).unwrap();
        assert_eq!(f.corner_triples(), 84 * 81);
        assert_eq!(f.instance_count(), 84 * 81 * 8);
    }

    #[test]
    fn corners_lie_in_distinct_boxes() {
        let f = HardFamily::new(10, 2).unwrap();
        for i in (0..f.corner_triples()).step_by(7) {
            let cs = f.corners(i);
            let boxes = cs.map(|v| f.partition.box_of[v]);
            assert!(boxes[0] < boxes[1] && boxes[1] < boxes[2]);
        }
    }

    #[test]
    fn empty_budget() {
        assert!(generate_hard_instances(27, 0, 1).unwrap().is_empty());
    }

    #[test]
    fn sampling_is_seeded() {
        let a = generate_hard_instances(27, 40, 3).unwrap();
        let b = generate_hard_instances(27, 40, 3).unwrap();
        assert_eq!(a.len(), 40);
        assert_eq!(a, b);
        assert_ne!(a, generate_hard_instances(27, 40, 4).unwrap());
    }
}
