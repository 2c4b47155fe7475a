//! Torus geometry, cell indexing, and the real amplitude vector.
//!
//! Cells are stored row-major. Coordinates wrap when a [`Coord`] is built
//! through [`GridGeometry::coord`], so nothing downstream does modular
//! arithmetic on raw indices.

use std::fmt;

use crate::error::{Error, Result};

/// Tolerance on `|‖ψ‖² − 1|` for a single operator application.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridGeometry {
    side: usize,
}

impl GridGeometry {
    pub fn new(side: usize) -> Result<Self> {
        if side < 2 {
            return Err(Error::SideTooSmall(side));
        }
        Ok(GridGeometry { side })
    }

    /// Geometry for `n` cells; `n` must be a perfect square.
    pub fn from_cell_count(n: usize) -> Result<Self> {
        let side = n.isqrt();
        if side * side != n {
            return Err(Error::NotSquare(n));
        }
        Self::new(side)
    }

    #[inline]
    pub fn side(&self) -> usize {
        self.side
    }

    #[inline]
    pub fn cell_count(&self) -> usize {
        self.side * self.side
    }

    /// Builds a coordinate, reducing both components modulo the side.
    #[inline]
    pub fn coord(&self, row: i64, col: i64) -> Coord {
        let l = self.side as i64;
        Coord {
            row: row.rem_euclid(l) as usize,
            col: col.rem_euclid(l) as usize,
        }
    }

    #[inline]
    pub fn cell_index(&self, c: Coord) -> usize {
        debug_assert!(c.row < self.side && c.col < self.side);
        c.row * self.side + c.col
    }

    /// Row-major offset of `(row, col)` after wraparound.
    #[inline]
    pub fn index(&self, row: i64, col: i64) -> usize {
        self.cell_index(self.coord(row, col))
    }

    #[inline]
    pub fn coord_of(&self, index: usize) -> Coord {
        Coord {
            row: index / self.side,
            col: index % self.side,
        }
    }

    /// Chebyshev distance on the torus.
    pub fn torus_distance(&self, a: Coord, b: Coord) -> usize {
        let wrap = |x: usize, y: usize| {
            let d = x.abs_diff(y);
            d.min(self.side - d)
        };
        wrap(a.row, b.row).max(wrap(a.col, b.col))
    }

    pub fn cells(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..self.cell_count()).map(move |idx| self.coord_of(idx))
    }
}

/// A cell `|i,j⟩`, already reduced into `[0, L)²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

/// The cells the oracle negates. Nonempty, distinct, inside the grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSet {
    geometry: GridGeometry,
    cells: Vec<Coord>,
}

impl MarkedSet {
    pub fn new<I>(geometry: GridGeometry, cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        let side = geometry.side();
        let mut out: Vec<Coord> = Vec::new();
        for (i, j) in cells {
            if i < 0 || j < 0 || i as usize >= side || j as usize >= side {
                return Err(Error::MarkedOutOfRange { i, j, side });
            }
            let c = Coord {
                row: i as usize,
                col: j as usize,
            };
            if out.contains(&c) {
                return Err(Error::DuplicateMarked(c.row, c.col));
            }
            out.push(c);
        }
        if out.is_empty() {
            return Err(Error::EmptyMarked);
        }
        Ok(MarkedSet {
            geometry,
            cells: out,
        })
    }

    pub fn single(geometry: GridGeometry, row: usize, col: usize) -> Result<Self> {
        Self::new(geometry, [(row as i64, col as i64)])
    }

    /// Default placement `(⌊L/2⌋+1, ⌊L/2⌋+1)`: generically off both tile lattices.
    pub fn default_for(geometry: GridGeometry) -> Self {
        let c = geometry.coord(
            geometry.side() as i64 / 2 + 1,
            geometry.side() as i64 / 2 + 1,
        );
        MarkedSet {
            geometry,
            cells: vec![c],
        }
    }

    pub fn geometry(&self) -> GridGeometry {
        self.geometry
    }

    pub fn cells(&self) -> &[Coord] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().map(|&c| self.geometry.cell_index(c))
    }
}

/// Real amplitudes over the torus, one per cell.
#[derive(Clone, Debug, PartialEq)]
pub struct GridState {
    geometry: GridGeometry,
    amplitudes: Vec<f64>,
}

impl GridState {
    /// The uniform superposition `|s⟩`.
    pub fn uniform(geometry: GridGeometry) -> Self {
        let n = geometry.cell_count();
        GridState {
            geometry,
            amplitudes: vec![1.0 / (n as f64).sqrt(); n],
        }
    }

    pub fn basis(geometry: GridGeometry, cell: Coord) -> Self {
        let mut amplitudes = vec![0.0; geometry.cell_count()];
        amplitudes[geometry.cell_index(cell)] = 1.0;
        GridState {
            geometry,
            amplitudes,
        }
    }

    /// Wraps a raw row-major amplitude vector. The vector must have unit norm.
    pub fn from_amplitudes(geometry: GridGeometry, amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.len() != geometry.cell_count() {
            return Err(Error::GeometryMismatch {
                expected: geometry.side(),
                found: amplitudes.len().isqrt(),
            });
        }
        let state = GridState {
            geometry,
            amplitudes,
        };
        let norm_sq = state.norm_sq();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NormDrift {
                norm_sq,
                applications: 0,
            });
        }
        Ok(state)
    }

    pub fn geometry(&self) -> GridGeometry {
        self.geometry
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [f64] {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, c: Coord) -> f64 {
        self.amplitudes[self.geometry.cell_index(c)]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    /// Born-rule probability of measuring any marked cell.
    pub fn marked_probability(&self, marked: &MarkedSet) -> f64 {
        marked
            .indices()
            .map(|idx| self.amplitudes[idx] * self.amplitudes[idx])
            .sum()
    }

    pub(crate) fn check_geometry(&self, expected: GridGeometry) -> Result<()> {
        if self.geometry != expected {
            return Err(Error::GeometryMismatch {
                expected: expected.side(),
                found: self.geometry.side(),
            });
        }
        Ok(())
    }
}
