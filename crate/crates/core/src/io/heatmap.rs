//! Binned amplitude rasters written as binary portable pixmaps (P6).

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::simulator::AmplitudeGrid;

pub const BIN_COUNT: usize = 10;

/// Ten bins of width 0.15 over `[-0.5, 1.0]`, darkest to brightest.
///
/// Bin 3 holds the uniform baseline of small grids; bin 4 (light blue) and
/// bin 6 (lime green) are where build-up around the marked cell shows.
pub const DEFAULT_COLORS: [[u8; 3]; BIN_COUNT] = [
    [12, 7, 46],
    [35, 24, 104],
    [33, 70, 160],
    [40, 110, 190],
    [90, 160, 220],
    [100, 190, 170],
    [150, 225, 60],
    [215, 230, 60],
    [250, 235, 120],
    [255, 255, 240],
];

#[derive(Clone, Debug, PartialEq)]
pub struct HeatmapStyle {
    pub bin_width: f64,
    pub floor: f64,
    pub colors: [[u8; 3]; BIN_COUNT],
}

impl Default for HeatmapStyle {
    fn default() -> Self {
        HeatmapStyle {
            bin_width: 0.15,
            floor: -0.5,
            colors: DEFAULT_COLORS,
        }
    }
}

impl HeatmapStyle {
    pub fn ceiling(&self) -> f64 {
        self.floor + self.bin_width * BIN_COUNT as f64
    }

    /// `⌊(clamp(a) − floor) / width⌋`, capped at the last bin.
    pub fn bin(&self, amplitude: f64) -> usize {
        let a = amplitude.clamp(self.floor, self.ceiling());
        let idx = ((a - self.floor) / self.bin_width).floor() as usize;
        idx.min(BIN_COUNT - 1)
    }

    pub fn color(&self, amplitude: f64) -> [u8; 3] {
        self.colors[self.bin(amplitude)]
    }
}

/// P6 bytes: `side·scale` pixels square, each cell drawn as a `scale×scale` block.
pub fn encode_ppm(grid: &AmplitudeGrid, style: &HeatmapStyle, scale: usize) -> Vec<u8> {
    let scale = scale.max(1);
    let px = grid.side() * scale;
    let header = format!("P6\n{px} {px}\n255\n");
    let mut out = Vec::with_capacity(header.len() + px * px * 3);
    out.extend_from_slice(header.as_bytes());
    for row in grid.rows() {
        let line: Vec<u8> = row
            .iter()
            .flat_map(|&a| {
                let c = style.color(a);
                std::iter::repeat_n(c, scale).flatten()
            })
            .collect();
        for _ in 0..scale {
            out.extend_from_slice(&line);
        }
    }
    out
}

pub fn emit_heatmap(
    grid: &AmplitudeGrid,
    style: &HeatmapStyle,
    scale: usize,
    path: &Path,
) -> Result<()> {
    fs::write(path, encode_ppm(grid, style, scale)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::snapshot;
    use crate::state::{GridGeometry, GridState};

    #[test]
    fn bins_tile_the_range() {
        let s = HeatmapStyle::default();
        assert!((s.ceiling() - 1.0).abs() < 1e-12);
        assert_eq!(s.bin(0.05), 3);
        assert_eq!(s.bin(-0.7), 0);
        assert_eq!(s.bin(-0.5), 0);
        assert_eq!(s.bin(0.0), 3);
        assert_eq!(s.bin(0.149), 4);
        assert_eq!(s.bin(0.15), 4);
        assert_eq!(s.bin(1.0), 9);
        assert_eq!(s.bin(3.0), 9);
    }

    #[test]
    fn colors_brighten_with_bin() {
        let luma = |c: [u8; 3]| 0.299 * c[0] as f64 + 0.587 * c[1] as f64 + 0.114 * c[2] as f64;
        for w in DEFAULT_COLORS.windows(2) {
            assert!(luma(w[0]) < luma(w[1]));
        }
    }

    #[test]
    fn uniform_grid_is_one_color() {
        let g = GridGeometry::new(20).unwrap();
        let grid = snapshot(&GridState::uniform(g));
        let bytes = encode_ppm(&grid, &HeatmapStyle::default(), 2);
        let header = b"P6\n40 40\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        let pixels = &bytes[header.len()..];
        assert_eq!(pixels.len(), 40 * 40 * 3);
        assert!(pixels.chunks(3).all(|p| p == DEFAULT_COLORS[3]));
    }
}
