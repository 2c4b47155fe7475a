//! Perfect tilings of the torus into equal-shaped cell groups.
//!
//! Each group carries one uniform-superposition projector; because groups
//! are disjoint the projectors are mutually orthogonal, and the sum of them
//! minus the identity is a reflection.

use std::fmt;

use crate::error::{Error, Result};
use crate::state::{Coord, GridGeometry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartitionKind {
    Square,
    ShiftedSquare,
    Cross,
    FourCorners,
    Custom,
}

impl PartitionKind {
    pub fn tag(&self) -> &'static str {
        match self {
            PartitionKind::Square => "square",
            PartitionKind::ShiftedSquare => "shifted-square",
            PartitionKind::Cross => "cross",
            PartitionKind::FourCorners => "four-corners",
            PartitionKind::Custom => "custom",
        }
    }
}

impl fmt::Display for PartitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Axis-aligned `d×d` tiles whose origins sit at `(d·i + row_shift, d·j + col_shift)`.
///
/// Partitions with this shape get a strided diffusion kernel instead of the
/// generic gather/scatter one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    pub tile: usize,
    pub row_shift: usize,
    pub col_shift: usize,
}

#[derive(Clone, Debug)]
pub struct Partition {
    geometry: GridGeometry,
    kind: PartitionKind,
    tile: usize,
    groups: Vec<Vec<Coord>>,
    block: Option<BlockLayout>,
}

impl Partition {
    /// Arbitrary groups, unvalidated. Intended for fixtures.
    pub fn custom(geometry: GridGeometry, groups: Vec<Vec<Coord>>) -> Self {
        Partition {
            geometry,
            kind: PartitionKind::Custom,
            tile: 0,
            groups,
            block: None,
        }
    }

    pub fn geometry(&self) -> GridGeometry {
        self.geometry
    }

    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    /// Tile side for squares and corner spacing for four-corners; 5 for crosses.
    pub fn tile(&self) -> usize {
        self.tile
    }

    /// Nominal robot steps charged for one application: `d` for square tiles
    /// and corner quadruples, 1 for crosses (every cell is one step from the
    /// center), the largest group size for custom partitions.
    pub fn step_cost(&self) -> u64 {
        match self.kind {
            PartitionKind::Square | PartitionKind::ShiftedSquare | PartitionKind::FourCorners => {
                self.tile as u64
            }
            PartitionKind::Cross => 1,
            PartitionKind::Custom => self.groups.iter().map(Vec::len).max().unwrap_or(0) as u64,
        }
    }

    pub fn groups(&self) -> &[Vec<Coord>] {
        &self.groups
    }

    pub fn block_layout(&self) -> Option<BlockLayout> {
        self.block
    }

    /// Group id of every cell in row-major order. Cells not covered map to
    /// `usize::MAX`; a cell covered twice keeps its last group.
    pub fn group_ids(&self) -> Vec<usize> {
        let mut ids = vec![usize::MAX; self.geometry.cell_count()];
        for (g, cells) in self.groups.iter().enumerate() {
            for &c in cells {
                ids[self.geometry.cell_index(c)] = g;
            }
        }
        ids
    }

    /// The same tiling moved by `(dr, dc)` on the torus.
    pub fn translate(&self, dr: i64, dc: i64) -> Partition {
        let g = self.geometry;
        let groups = self
            .groups
            .iter()
            .map(|cells| {
                cells
                    .iter()
                    .map(|c| g.coord(c.row as i64 + dr, c.col as i64 + dc))
                    .collect()
            })
            .collect();
        let block = self.block.map(|b| {
            let l = g.side() as i64;
            BlockLayout {
                tile: b.tile,
                row_shift: (b.row_shift as i64 + dr).rem_euclid(l) as usize,
                col_shift: (b.col_shift as i64 + dc).rem_euclid(l) as usize,
            }
        });
        Partition {
            geometry: g,
            kind: self.kind,
            tile: self.tile,
            groups,
            block,
        }
    }
}

/// What is wrong with a candidate partition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionReport {
    pub duplicated: Vec<Coord>,
    pub missing: Vec<Coord>,
    pub empty_groups: usize,
    pub out_of_range: usize,
}

impl PartitionReport {
    pub fn is_ok(&self) -> bool {
        self.duplicated.is_empty()
            && self.missing.is_empty()
            && self.empty_groups == 0
            && self.out_of_range == 0
    }
}

impl fmt::Display for PartitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} duplicated cells, {} missing cells, {} empty groups, {} out-of-range cells",
            self.duplicated.len(),
            self.missing.len(),
            self.empty_groups,
            self.out_of_range
        )
    }
}

/// Checks that every cell appears in exactly one group and no group is empty.
pub fn validate_partition(p: &Partition) -> Result<(), PartitionReport> {
    let g = p.geometry;
    let mut hits = vec![0u32; g.cell_count()];
    let mut report = PartitionReport::default();
    for cells in &p.groups {
        if cells.is_empty() {
            report.empty_groups += 1;
        }
        for c in cells {
            if c.row >= g.side() || c.col >= g.side() {
                report.out_of_range += 1;
                continue;
            }
            hits[g.cell_index(*c)] += 1;
        }
    }
    for (idx, &h) in hits.iter().enumerate() {
        match h {
            0 => report.missing.push(g.coord_of(idx)),
            1 => {}
            _ => report.duplicated.push(g.coord_of(idx)),
        }
    }
    if report.is_ok() {
        Ok(())
    } else {
        Err(report)
    }
}

fn require_divides(what: &'static str, divisor: usize, side: usize) -> Result<()> {
    if divisor == 0 {
        return Err(Error::ZeroTile);
    }
    if !side.is_multiple_of(divisor) {
        return Err(Error::NotDivisible {
            what,
            divisor,
            side,
        });
    }
    Ok(())
}

fn blocks(geometry: GridGeometry, d: usize, shift: usize, kind: PartitionKind) -> Partition {
    let per_axis = geometry.side() / d;
    let mut groups = Vec::with_capacity(per_axis * per_axis);
    for bi in 0..per_axis {
        for bj in 0..per_axis {
            let r0 = (bi * d + shift) as i64;
            let c0 = (bj * d + shift) as i64;
            let mut cells = Vec::with_capacity(d * d);
            for x in 0..d as i64 {
                for y in 0..d as i64 {
                    cells.push(geometry.coord(r0 + x, c0 + y));
                }
            }
            groups.push(cells);
        }
    }
    Partition {
        geometry,
        kind,
        tile: d,
        groups,
        block: Some(BlockLayout {
            tile: d,
            row_shift: shift % geometry.side(),
            col_shift: shift % geometry.side(),
        }),
    }
}

/// Aligned `d×d` tiles with origins `(d·i, d·j)`.
pub fn square_partition(geometry: GridGeometry, d: usize) -> Result<Partition> {
    require_divides("square tile", d, geometry.side())?;
    Ok(blocks(geometry, d, 0, PartitionKind::Square))
}

/// `d×d` tiles with origins `(d·i + ⌊d/2⌋, d·j + ⌊d/2⌋)`, wrapping on the torus.
pub fn shifted_square_partition(geometry: GridGeometry, d: usize) -> Result<Partition> {
    require_divides("shifted square tile", d, geometry.side())?;
    Ok(blocks(geometry, d, d / 2, PartitionKind::ShiftedSquare))
}

/// Plus-shaped groups (center and its four von Neumann neighbours).
///
/// Centers are the cells with `i + 2j ≡ 0 (mod 5)`: consecutive centers sit
/// `(2, 1)` apart and the five-cell crosses tile the torus whenever `5 | L`.
pub fn cross_partition(geometry: GridGeometry) -> Result<Partition> {
    require_divides("cross tiling", 5, geometry.side())?;
    let mut groups = Vec::with_capacity(geometry.cell_count() / 5);
    for c in geometry.cells() {
        if (c.row + 2 * c.col) % 5 != 0 {
            continue;
        }
        let (i, j) = (c.row as i64, c.col as i64);
        groups.push(vec![
            c,
            geometry.coord(i - 1, j),
            geometry.coord(i + 1, j),
            geometry.coord(i, j - 1),
            geometry.coord(i, j + 1),
        ]);
    }
    Ok(Partition {
        geometry,
        kind: PartitionKind::Cross,
        tile: 5,
        groups,
        block: None,
    })
}

/// Quadruples `{(a, b) + (x, y) : x, y ∈ {0, d}}` inside each `2d×2d` block.
pub fn four_corners_partition(geometry: GridGeometry, d: usize) -> Result<Partition> {
    if d == 0 {
        return Err(Error::ZeroTile);
    }
    require_divides("four-corners block", 2 * d, geometry.side())?;
    let per_axis = geometry.side() / (2 * d);
    let mut groups = Vec::with_capacity(geometry.cell_count() / 4);
    for bi in 0..per_axis {
        for bj in 0..per_axis {
            for a in 0..d {
                for b in 0..d {
                    let r = (2 * d * bi + a) as i64;
                    let c = (2 * d * bj + b) as i64;
                    let d = d as i64;
                    groups.push(vec![
                        geometry.coord(r, c),
                        geometry.coord(r + d, c),
                        geometry.coord(r, c + d),
                        geometry.coord(r + d, c + d),
                    ]);
                }
            }
        }
    }
    Ok(Partition {
        geometry,
        kind: PartitionKind::FourCorners,
        tile: d,
        groups,
        block: None,
    })
}
