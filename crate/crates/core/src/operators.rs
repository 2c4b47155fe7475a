//! Oracle, partition diffusion and global Grover diffusion.
//!
//! Every operator here is a real reflection applied in place. Partition
//! diffusion maps each amplitude `a` in group `g` to `2·mean(g) − a`, which is
//! `2 Σ_g |u_g⟩⟨u_g| − I` without ever forming the matrix. The dense form is
//! available through [`materialize_dense`] for small grids only.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::state::{GridGeometry, GridState, MarkedSet};
use crate::tessellation::{validate_partition, BlockLayout, Partition};

/// Largest cell count [`materialize_dense`] accepts by default.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Grids at least this large diffuse block-rows in parallel.
const PARALLEL_MIN_CELLS: usize = 1 << 16;

/// `I − 2 Σ_w |w⟩⟨w|` over the marked cells `w`.
#[derive(Clone, Debug)]
pub struct OracleSpec {
    marked: MarkedSet,
    indices: Vec<usize>,
}

impl OracleSpec {
    pub fn new(marked: MarkedSet) -> Self {
        let indices = marked.indices().collect();
        OracleSpec { marked, indices }
    }

    pub fn marked(&self) -> &MarkedSet {
        &self.marked
    }

    pub fn geometry(&self) -> GridGeometry {
        self.marked.geometry()
    }

    fn apply_raw(&self, amplitudes: &mut [f64]) {
        for &idx in &self.indices {
            amplitudes[idx] = -amplitudes[idx];
        }
    }
}

#[derive(Clone, Debug)]
enum Kernel {
    Blocks {
        layout: BlockLayout,
        col_block: Vec<usize>,
    },
    Groups {
        offsets: Vec<usize>,
        starts: Vec<usize>,
    },
}

/// Reflection about the span of a partition's group superpositions.
#[derive(Clone, Debug)]
pub struct DiffusionSpec {
    partition: Partition,
    kernel: Kernel,
}

impl DiffusionSpec {
    /// Validates the partition and picks the strided kernel when the groups
    /// are axis-aligned square tiles.
    pub fn new(partition: Partition) -> Result<Self> {
        validate_partition(&partition).map_err(Error::InvalidPartition)?;
        let kernel = match partition.block_layout() {
            Some(layout) => {
                let side = partition.geometry().side();
                let shift = layout.col_shift % layout.tile;
                let col_block = (0..side)
                    .map(|c| ((c + side - shift) % side) / layout.tile)
                    .collect();
                Kernel::Blocks { layout, col_block }
            }
            None => Self::groups_kernel(&partition),
        };
        Ok(DiffusionSpec { partition, kernel })
    }

    /// Same operator, but always through the generic gather/scatter kernel.
    pub fn with_generic_kernel(partition: Partition) -> Result<Self> {
        validate_partition(&partition).map_err(Error::InvalidPartition)?;
        let kernel = Self::groups_kernel(&partition);
        Ok(DiffusionSpec { partition, kernel })
    }

    fn groups_kernel(partition: &Partition) -> Kernel {
        let g = partition.geometry();
        let mut offsets = Vec::with_capacity(g.cell_count());
        let mut starts = Vec::with_capacity(partition.groups().len() + 1);
        for cells in partition.groups() {
            starts.push(offsets.len());
            offsets.extend(cells.iter().map(|&c| g.cell_index(c)));
        }
        starts.push(offsets.len());
        Kernel::Groups { offsets, starts }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn geometry(&self) -> GridGeometry {
        self.partition.geometry()
    }

    fn apply_raw(&self, amplitudes: &mut [f64]) {
        match &self.kernel {
            Kernel::Blocks { layout, col_block } => {
                reflect_blocks(amplitudes, self.geometry().side(), *layout, col_block)
            }
            Kernel::Groups { offsets, starts } => {
                for w in starts.windows(2) {
                    let group = &offsets[w[0]..w[1]];
                    let sum: f64 = group.iter().map(|&i| amplitudes[i]).sum();
                    let twice_mean = 2.0 * sum / group.len() as f64;
                    for &i in group {
                        amplitudes[i] = twice_mean - amplitudes[i];
                    }
                }
            }
        }
    }
}

/// Reflects every tile that intersects `rows` (a list of row-major row
/// segments that together form one band of `tile` rows).
fn reflect_band(rows: &mut [&mut [f64]], side: usize, tile: usize, col_block: &[usize]) {
    let mut sums = vec![0.0; side / tile];
    for seg in rows.iter() {
        for row in seg.chunks_exact(side) {
            for (v, &b) in row.iter().zip(col_block) {
                sums[b] += v;
            }
        }
    }
    let scale = 2.0 / (tile * tile) as f64;
    sums.iter_mut().for_each(|s| *s *= scale);
    for seg in rows.iter_mut() {
        for row in seg.chunks_exact_mut(side) {
            for (v, &b) in row.iter_mut().zip(col_block) {
                *v = sums[b] - *v;
            }
        }
    }
}

fn reflect_blocks(a: &mut [f64], side: usize, layout: BlockLayout, col_block: &[usize]) {
    let tile = layout.tile;
    let row_shift = layout.row_shift % tile;
    let band = tile * side;
    // Bands are contiguous except the one that wraps past the last row.
    let (head, rest) = a.split_at_mut(row_shift * side);
    let body_len = if row_shift == 0 {
        rest.len()
    } else {
        rest.len() + head.len() - band
    };
    let (body, tail) = rest.split_at_mut(body_len);

    let work = |chunk: &mut [f64]| reflect_band(&mut [chunk], side, tile, col_block);
    if side * side >= PARALLEL_MIN_CELLS {
        body.par_chunks_mut(band).for_each(work);
    } else {
        body.chunks_mut(band).for_each(work);
    }
    if row_shift > 0 {
        reflect_band(&mut [tail, head], side, tile, col_block);
    }
}

fn global_grover_raw(amplitudes: &mut [f64]) {
    let twice_mean = 2.0 * amplitudes.iter().sum::<f64>() / amplitudes.len() as f64;
    for a in amplitudes.iter_mut() {
        *a = twice_mean - *a;
    }
}

/// Negates the amplitude of every marked cell.
pub fn apply_oracle(state: &mut GridState, spec: &OracleSpec) -> Result<()> {
    state.check_geometry(spec.geometry())?;
    spec.apply_raw(state.amplitudes_mut());
    Ok(())
}

/// Within each group, `a ↦ 2·mean − a`.
pub fn apply_partition_diffusion(state: &mut GridState, spec: &DiffusionSpec) -> Result<()> {
    state.check_geometry(spec.geometry())?;
    spec.apply_raw(state.amplitudes_mut());
    Ok(())
}

/// `2|s⟩⟨s| − I` for the uniform state `s`: inversion about the global mean.
pub fn apply_global_grover(state: &mut GridState) {
    global_grover_raw(state.amplitudes_mut());
}

/// Any operator this crate can apply.
#[derive(Clone, Copy, Debug)]
pub enum Operator<'a> {
    Oracle(&'a OracleSpec),
    Diffusion(&'a DiffusionSpec),
    GlobalGrover,
}

impl Operator<'_> {
    pub fn apply(&self, state: &mut GridState) -> Result<()> {
        match self {
            Operator::Oracle(o) => apply_oracle(state, o),
            Operator::Diffusion(d) => apply_partition_diffusion(state, d),
            Operator::GlobalGrover => {
                apply_global_grover(state);
                Ok(())
            }
        }
    }

    fn check_geometry(&self, geometry: GridGeometry) -> Result<()> {
        let own = match self {
            Operator::Oracle(o) => o.geometry(),
            Operator::Diffusion(d) => d.geometry(),
            Operator::GlobalGrover => return Ok(()),
        };
        if own != geometry {
            return Err(Error::GeometryMismatch {
                expected: own.side(),
                found: geometry.side(),
            });
        }
        Ok(())
    }

    fn apply_raw(&self, amplitudes: &mut [f64]) {
        match self {
            Operator::Oracle(o) => o.apply_raw(amplitudes),
            Operator::Diffusion(d) => d.apply_raw(amplitudes),
            Operator::GlobalGrover => global_grover_raw(amplitudes),
        }
    }
}

/// The `n×n` matrix whose column `x` is the operator applied to `|x⟩`.
pub fn materialize_dense(
    op: Operator<'_>,
    geometry: GridGeometry,
    cap: usize,
) -> Result<DMatrix<f64>> {
    let n = geometry.cell_count();
    if n > cap {
        return Err(Error::DenseCapExceeded { n, cap });
    }
    op.check_geometry(geometry)?;
    let mut m = DMatrix::zeros(n, n);
    let mut column = vec![0.0; n];
    for x in 0..n {
        column.iter_mut().for_each(|v| *v = 0.0);
        column[x] = 1.0;
        op.apply_raw(&mut column);
        m.column_mut(x).copy_from_slice(&column);
    }
    Ok(m)
}
