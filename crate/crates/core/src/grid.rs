//! Discrete domains and the finite-difference blocks built on them.
//!
//! Unknowns live on interior nodes only. Homogeneous Dirichlet data is
//! absorbed by dropping boundary columns, so a stencil neighbour is either
//! another interior node or [`Neighbor::Boundary`].

use std::collections::VecDeque;
use std::fmt;
use std::path::Path;

use crate::error::{invalid, Result};
use crate::sparse::SparseOperator;

/// Slack allowed when checking a drift against its declared cap.
pub const CAP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Interval,
    Circle,
    MaskedRectangle,
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridKind::Interval => "interval",
            GridKind::Circle => "circle",
            GridKind::MaskedRectangle => "masked_rectangle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbor {
    Interior(usize),
    Boundary,
}

impl Neighbor {
    pub fn index(self) -> Option<usize> {
        match self {
            Neighbor::Interior(j) => Some(j),
            Neighbor::Boundary => None,
        }
    }
}

/// A uniform grid on an interval, a circle, or a masked rectangle.
#[derive(Debug, Clone)]
pub struct Grid {
    kind: GridKind,
    spacing: Vec<f64>,
    lengths: Vec<f64>,
    coords: Vec<[f64; 2]>,
    /// `neighbors[i][axis] = [minus, plus]`.
    neighbors: Vec<[[Neighbor; 2]; 2]>,
    boundary_coords: Vec<[f64; 2]>,
    mask: Option<CellMask>,
}

/// The cell layout behind a masked rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct CellMask {
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    /// Row-major, `cells[j * nx + i]`, rows in increasing y.
    pub cells: Vec<bool>,
}

impl CellMask {
    /// Parse the plain-text mask format: a header line `nx ny hx hy`, then
    /// `ny` rows of `nx` characters where `#` marks an interior cell and `.`
    /// an excluded one. Rows are listed in increasing y.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = match lines.next() {
            Some(h) => h,
            None => return invalid("mask file is empty"),
        };
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return invalid(format!("mask header must be `nx ny hx hy`, got `{header}`"));
        }
        let parse_usize = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| crate::DriftError::InvalidArgument(format!("bad count `{s}`")))
        };
        let parse_f64 = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| crate::DriftError::InvalidArgument(format!("bad spacing `{s}`")))
        };
        let nx = parse_usize(fields[0])?;
        let ny = parse_usize(fields[1])?;
        let hx = parse_f64(fields[2])?;
        let hy = parse_f64(fields[3])?;
        let mut cells = Vec::with_capacity(nx * ny);
        for row in 0..ny {
            let line = match lines.next() {
                Some(l) => l.trim_end(),
                None => return invalid(format!("mask has {row} rows, expected {ny}")),
            };
            if line.chars().count() != nx {
                return invalid(format!(
                    "mask row {row} has {} characters, expected {nx}",
                    line.chars().count()
                ));
            }
            for ch in line.chars() {
                match ch {
                    '#' => cells.push(true),
                    '.' => cells.push(false),
                    other => return invalid(format!("unexpected mask character `{other}`")),
                }
            }
        }
        if lines.next().is_some() {
            return invalid(format!("mask has more than {ny} rows"));
        }
        Ok(Self {
            nx,
            ny,
            hx,
            hy,
            cells,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.nx, self.ny, self.hx, self.hy);
        for j in 0..self.ny {
            for i in 0..self.nx {
                out.push(if self.cells[j * self.nx + i] {
                    '#'
                } else {
                    '.'
                });
            }
            out.push('\n');
        }
        out
    }
}

impl Grid {
    /// Uniform Dirichlet grid on `[a, b]` with `m` interior nodes.
    pub fn interval(a: f64, b: f64, m: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return invalid(format!("interval [{a}, {b}] has nonpositive length"));
        }
        if m == 0 {
            return invalid("interval grid needs at least one interior node");
        }
        let h = (b - a) / (m + 1) as f64;
        let coords = (1..=m).map(|i| [a + i as f64 * h, 0.0]).collect();
        let neighbors = (0..m)
            .map(|i| {
                let minus = if i == 0 {
                    Neighbor::Boundary
                } else {
                    Neighbor::Interior(i - 1)
                };
                let plus = if i + 1 == m {
                    Neighbor::Boundary
                } else {
                    Neighbor::Interior(i + 1)
                };
                [[minus, plus], [Neighbor::Boundary; 2]]
            })
            .collect();
        Ok(Self {
            kind: GridKind::Interval,
            spacing: vec![h],
            lengths: vec![b - a],
            coords,
            neighbors,
            boundary_coords: vec![[a, 0.0], [b, 0.0]],
            mask: None,
        })
    }

    /// Periodic grid on a circle of circumference `circumference`.
    pub fn circle(circumference: f64, m: usize) -> Result<Self> {
        if !circumference.is_finite() || circumference <= 0.0 {
            return invalid(format!("circumference {circumference} must be positive"));
        }
        if m < 3 {
            return invalid(format!("circle grid needs at least 3 nodes, got {m}"));
        }
        let h = circumference / m as f64;
        let coords = (0..m).map(|i| [i as f64 * h, 0.0]).collect();
        let neighbors = (0..m)
            .map(|i| {
                [
                    [
                        Neighbor::Interior((i + m - 1) % m),
                        Neighbor::Interior((i + 1) % m),
                    ],
                    [Neighbor::Boundary; 2],
                ]
            })
            .collect();
        Ok(Self {
            kind: GridKind::Circle,
            spacing: vec![h],
            lengths: vec![circumference],
            coords,
            neighbors,
            boundary_coords: Vec::new(),
            mask: None,
        })
    }

    /// Cell-centred grid on a rectangle with an arbitrary edge-connected set of
    /// interior cells. Cell `(i, j)` sits at `((i + 1) hx, (j + 1) hy)`; every
    /// stencil neighbour outside the mask is a Dirichlet node.
    pub fn masked_rectangle(mask: CellMask) -> Result<Self> {
        let CellMask {
            nx,
            ny,
            hx,
            hy,
            ref cells,
        } = mask;
        if nx == 0 || ny == 0 {
            return invalid("mask dimensions must be positive");
        }
        if !(hx > 0.0 && hy > 0.0 && hx.is_finite() && hy.is_finite()) {
            return invalid(format!("spacings ({hx}, {hy}) must be positive"));
        }
        if cells.len() != nx * ny {
            return invalid(format!(
                "mask has {} cells, expected {}",
                cells.len(),
                nx * ny
            ));
        }
        let mut index = vec![None; nx * ny];
        let mut coords = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                if cells[j * nx + i] {
                    index[j * nx + i] = Some(coords.len());
                    coords.push([(i + 1) as f64 * hx, (j + 1) as f64 * hy]);
                }
            }
        }
        if coords.is_empty() {
            return invalid("mask has no interior cells");
        }

        let cell = |i: isize, j: isize| -> Neighbor {
            if i < 0 || j < 0 || i >= nx as isize || j >= ny as isize {
                return Neighbor::Boundary;
            }
            match index[j as usize * nx + i as usize] {
                Some(k) => Neighbor::Interior(k),
                None => Neighbor::Boundary,
            }
        };
        let mut neighbors = Vec::with_capacity(coords.len());
        let mut boundary_cells = Vec::new();
        for j in 0..ny as isize {
            for i in 0..nx as isize {
                if index[j as usize * nx + i as usize].is_none() {
                    continue;
                }
                let stencil = [
                    [cell(i - 1, j), cell(i + 1, j)],
                    [cell(i, j - 1), cell(i, j + 1)],
                ];
                for (di, dj) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                    if cell(i + di, j + dj) == Neighbor::Boundary {
                        boundary_cells.push((i + di, j + dj));
                    }
                }
                neighbors.push(stencil);
            }
        }
        boundary_cells.sort_unstable();
        boundary_cells.dedup();
        let boundary_coords = boundary_cells
            .into_iter()
            .map(|(i, j)| [(i + 1) as f64 * hx, (j + 1) as f64 * hy])
            .collect();

        let grid = Self {
            kind: GridKind::MaskedRectangle,
            spacing: vec![hx, hy],
            lengths: vec![(nx + 1) as f64 * hx, (ny + 1) as f64 * hy],
            coords,
            neighbors,
            boundary_coords,
            mask: Some(mask),
        };
        if grid.component_count() != 1 {
            return invalid("mask interior is not edge-connected");
        }
        Ok(grid)
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Spatial dimension (1 or 2).
    pub fn dim(&self) -> usize {
        self.spacing.len()
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.spacing[axis]
    }

    /// Extent per axis; for masked rectangles this includes the Dirichlet
    /// frame around the cells.
    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn interior_count(&self) -> usize {
        self.coords.len()
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_coords.len()
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn boundary_coords(&self) -> &[[f64; 2]] {
        &self.boundary_coords
    }

    pub fn neighbors(&self, node: usize, axis: usize) -> [Neighbor; 2] {
        self.neighbors[node][axis]
    }

    pub fn mask(&self) -> Option<&CellMask> {
        self.mask.as_ref()
    }

    /// Upper bound on the domain diameter: the interval length, half the
    /// circumference, or the diagonal of the framed rectangle.
    pub fn diameter(&self) -> f64 {
        match self.kind {
            GridKind::Interval => self.lengths[0],
            GridKind::Circle => self.lengths[0] / 2.0,
            GridKind::MaskedRectangle => self.lengths[0].hypot(self.lengths[1]),
        }
    }

    /// Sample a function at the interior nodes.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        self.coords.iter().map(|&[x, y]| f(x, y)).collect()
    }

    fn component_count(&self) -> usize {
        let n = self.interior_count();
        let mut seen = vec![false; n];
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for axis in 0..self.dim() {
                    for nb in self.neighbors[i][axis] {
                        if let Neighbor::Interior(j) = nb {
                            if !seen[j] {
                                seen[j] = true;
                                queue.push_back(j);
                            }
                        }
                    }
                }
            }
        }
        components
    }
}

/// A drift vector per interior node together with its sup-norm cap.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftField {
    dim: usize,
    cap: f64,
    /// Node-major: `values[i * dim + axis]`.
    values: Vec<f64>,
}

impl DriftField {
    pub fn new(dim: usize, cap: f64, values: Vec<f64>) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return invalid(format!("drift dimension {dim} not supported"));
        }
        if !(cap >= 0.0 && cap.is_finite()) {
            return invalid(format!("drift cap {cap} must be finite and nonnegative"));
        }
        if !values.len().is_multiple_of(dim) {
            return invalid("drift values do not split into whole vectors");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("drift contains non-finite values");
        }
        let field = Self { dim, cap, values };
        let worst = field.max_norm();
        if worst > cap + CAP_SLACK {
            return invalid(format!("drift norm {worst} exceeds cap {cap}"));
        }
        Ok(field)
    }

    pub fn zero(grid: &Grid, cap: f64) -> Result<Self> {
        Self::new(
            grid.dim(),
            cap,
            vec![0.0; grid.interior_count() * grid.dim()],
        )
    }

    /// Build from a closure returning the drift vector at `(x, y)`; the second
    /// component is ignored on 1D grids.
    pub fn from_fn(grid: &Grid, cap: f64, f: impl Fn(f64, f64) -> [f64; 2]) -> Result<Self> {
        let dim = grid.dim();
        let mut values = Vec::with_capacity(grid.interior_count() * dim);
        for &[x, y] in grid.coords() {
            let v = f(x, y);
            values.extend_from_slice(&v[..dim]);
        }
        Self::new(dim, cap, values)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn node_count(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn component(&self, node: usize, axis: usize) -> f64 {
        self.values[node * self.dim + axis]
    }

    pub fn vector(&self, node: usize) -> &[f64] {
        &self.values[node * self.dim..(node + 1) * self.dim]
    }

    pub fn norm_at(&self, node: usize) -> f64 {
        self.vector(node).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_norm(&self) -> f64 {
        (0..self.node_count())
            .map(|i| self.norm_at(i))
            .fold(0.0, f64::max)
    }

    /// Largest per-node Euclidean distance to another field.
    pub fn max_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.values.len(), other.values.len());
        self.values
            .chunks(self.dim)
            .zip(other.values.chunks(self.dim))
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(p, q)| (p - q) * (p - q))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.dim != grid.dim() || self.node_count() != grid.interior_count() {
            return invalid(format!(
                "drift has {} nodes in {}D, grid has {} nodes in {}D",
                self.node_count(),
                self.dim,
                grid.interior_count(),
                grid.dim()
            ));
        }
        Ok(())
    }
}

/// Relative slack on the `|v_a| h_a <= 1` switch, so `v_a = 1 / h_a` and
/// `C h = 1` are centered regardless of rounding.
const PECLET_SLACK: f64 = 1e-12;

/// How the first-order drift term `v . grad u` is differenced.
///
/// Both variants keep `-laplacian - advection` an M-matrix with strictly
/// negative off-diagonals for every drift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdvectionScheme {
    /// One-sided differences toward the drift direction on every axis:
    /// forward where the component is nonnegative, backward otherwise.
    Upwind,
    /// Centered differences where the cell Peclet number `|v_a| h_a` is at
    /// most 1, upwind elsewhere. Second order on resolved grids.
    #[default]
    Hybrid,
}

impl AdvectionScheme {
    pub(crate) fn centered(self, component: f64, h: f64) -> bool {
        matches!(self, AdvectionScheme::Hybrid) && component.abs() * h <= 1.0 + PECLET_SLACK
    }
}

/// Backward, centered and forward difference quotients of `u` at `node`
/// along `axis`, with the Dirichlet zeros filled in.
pub(crate) fn difference_quotients(grid: &Grid, u: &[f64], node: usize, axis: usize) -> [f64; 3] {
    let value = |nb: Neighbor| nb.index().map_or(0.0, |j| u[j]);
    let h = grid.spacing(axis);
    let [minus, plus] = grid.neighbors(node, axis);
    let (l, r) = (value(minus), value(plus));
    [(u[node] - l) / h, (r - l) / (2.0 * h), (r - u[node]) / h]
}

/// `(V(v) u)` at one node for the drift vector `v`, using the same stencil
/// as [`advection_matrix`].
pub(crate) fn advection_at(
    grid: &Grid,
    u: &[f64],
    node: usize,
    v: &[f64],
    scheme: AdvectionScheme,
) -> f64 {
    (0..grid.dim())
        .map(|axis| {
            let va = v[axis];
            if va == 0.0 {
                return 0.0;
            }
            let [back, center, fwd] = difference_quotients(grid, u, node, axis);
            let d = if scheme.centered(va, grid.spacing(axis)) {
                center
            } else if va >= 0.0 {
                fwd
            } else {
                back
            };
            va * d
        })
        .sum()
}

/// The discrete analyst's Laplacian (negative semidefinite).
pub fn laplacian_matrix(grid: &Grid) -> SparseOperator {
    let n = grid.interior_count();
    let mut triplets = Vec::with_capacity(n * (1 + 2 * grid.dim()));
    for i in 0..n {
        for axis in 0..grid.dim() {
            let inv_h2 = 1.0 / (grid.spacing(axis) * grid.spacing(axis));
            triplets.push((i, i, -2.0 * inv_h2));
            for nb in grid.neighbors(i, axis) {
                if let Neighbor::Interior(j) = nb {
                    triplets.push((i, j, inv_h2));
                }
            }
        }
    }
    SparseOperator::from_triplets(n, &triplets).expect("indices come from the grid")
}

/// The discrete drift term `u -> v . grad u`.
pub fn advection_matrix(
    grid: &Grid,
    drift: &DriftField,
    scheme: AdvectionScheme,
) -> Result<SparseOperator> {
    drift.check_grid(grid)?;
    let n = grid.interior_count();
    let mut triplets = Vec::with_capacity(n * 3 * grid.dim());
    for i in 0..n {
        for axis in 0..grid.dim() {
            let v = drift.component(i, axis);
            if v == 0.0 {
                continue;
            }
            let h = grid.spacing(axis);
            let [minus, plus] = grid.neighbors(i, axis);
            if scheme.centered(v, h) {
                let w = v / (2.0 * h);
                if let Neighbor::Interior(j) = plus {
                    triplets.push((i, j, w));
                }
                if let Neighbor::Interior(j) = minus {
                    triplets.push((i, j, -w));
                }
            } else if v >= 0.0 {
                let w = v / h;
                triplets.push((i, i, -w));
                if let Neighbor::Interior(j) = plus {
                    triplets.push((i, j, w));
                }
            } else {
                let w = v / h;
                triplets.push((i, i, w));
                if let Neighbor::Interior(j) = minus {
                    triplets.push((i, j, -w));
                }
            }
        }
    }
    SparseOperator::from_triplets(n, &triplets)
}

/// Nodal gradient: centered where both stencil neighbours are interior,
/// one-sided toward the interior neighbour where one is a boundary node, and
/// zero on an axis where both are.
pub fn gradient(grid: &Grid, u: &[f64]) -> Vec<[f64; 2]> {
    assert_eq!(u.len(), grid.interior_count(), "nodal vector length");
    (0..grid.interior_count())
        .map(|i| {
            let mut g = [0.0; 2];
            for (axis, slot) in g.iter_mut().enumerate().take(grid.dim()) {
                let h = grid.spacing(axis);
                *slot = match grid.neighbors(i, axis) {
                    [Neighbor::Interior(l), Neighbor::Interior(r)] => (u[r] - u[l]) / (2.0 * h),
                    [Neighbor::Boundary, Neighbor::Interior(r)] => (u[r] - u[i]) / h,
                    [Neighbor::Interior(l), Neighbor::Boundary] => (u[i] - u[l]) / h,
                    [Neighbor::Boundary, Neighbor::Boundary] => 0.0,
                };
            }
            g
        })
        .collect()
}

/// Centered gradient with the homogeneous Dirichlet values filled in: the
/// difference quotient the centered advection stencil applies to `u`.
pub fn stencil_gradient(grid: &Grid, u: &[f64]) -> Vec<[f64; 2]> {
    assert_eq!(u.len(), grid.interior_count(), "nodal vector length");
    let value = |nb: Neighbor| nb.index().map_or(0.0, |j| u[j]);
    (0..grid.interior_count())
        .map(|i| {
            let mut g = [0.0; 2];
            for (axis, slot) in g.iter_mut().enumerate().take(grid.dim()) {
                let [l, r] = grid.neighbors(i, axis);
                *slot = (value(r) - value(l)) / (2.0 * grid.spacing(axis));
            }
            g
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn interval_grid_layout() {
        let g = Grid::interval(-1.0, 1.0, 3).unwrap();
        assert_eq!(g.spacing(0), 0.5);
        let xs: Vec<f64> = g.coords().iter().map(|c| c[0]).collect();
        assert_eq!(xs, vec![-0.5, 0.0, 0.5]);
        assert_eq!(g.boundary_count(), 2);

        let g = Grid::interval(0.0, 1.0, 1).unwrap();
        assert_eq!(g.spacing(0), 0.5);
        assert_eq!(g.coords()[0][0], 0.5);

        let g = Grid::interval(0.0, 1.0, 199).unwrap();
        assert!(close(g.spacing(0), 0.005, 1e-15));
        assert_eq!(g.interior_count(), 199);
    }

    #[test]
    fn interval_rejects_bad_arguments() {
        assert!(Grid::interval(1.0, 1.0, 3).is_err());
        assert!(Grid::interval(1.0, 0.0, 3).is_err());
        assert!(Grid::interval(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn circle_is_cyclic() {
        let g = Grid::circle(4.0, 4).unwrap();
        assert_eq!(g.spacing(0), 1.0);
        assert_eq!(
            g.neighbors(0, 0),
            [Neighbor::Interior(3), Neighbor::Interior(1)]
        );
        assert_eq!(g.boundary_count(), 0);
        assert!(close(
            Grid::circle(4.0, 400).unwrap().spacing(0),
            0.01,
            1e-15
        ));
        assert!(close(
            Grid::circle(2.0 * PI, 3).unwrap().spacing(0),
            2.0 * PI / 3.0,
            1e-15
        ));
        assert!(Grid::circle(4.0, 2).is_err());
        assert!(Grid::circle(0.0, 10).is_err());
    }

    fn mask(nx: usize, ny: usize, rows: &[&str]) -> CellMask {
        let cells = rows
            .iter()
            .flat_map(|r| r.chars().map(|c| c == '#'))
            .collect();
        CellMask {
            nx,
            ny,
            hx: 1.0,
            hy: 1.0,
            cells,
        }
    }

    #[test]
    fn masked_rectangle_counts_and_connectivity() {
        let full = Grid::masked_rectangle(mask(3, 3, &["###", "###", "###"])).unwrap();
        assert_eq!(full.interior_count(), 9);
        assert_eq!(full.boundary_count(), 12);

        let ring = Grid::masked_rectangle(mask(3, 3, &["###", "#.#", "###"])).unwrap();
        assert_eq!(ring.interior_count(), 8);

        let split = mask(5, 2, &["##.##", "##.##"]);
        assert!(Grid::masked_rectangle(split).is_err());
        assert!(Grid::masked_rectangle(mask(2, 2, &["..", ".."])).is_err());
        // diagonal contact is not an edge connection
        assert!(Grid::masked_rectangle(mask(2, 2, &["#.", ".#"])).is_err());
    }

    #[test]
    fn mask_text_round_trip_and_errors() {
        let text = "4 2 0.5 0.25\n##.#\n####\n";
        let m = CellMask::parse(text).unwrap();
        assert_eq!((m.nx, m.ny, m.hx, m.hy), (4, 2, 0.5, 0.25));
        assert_eq!(CellMask::parse(&m.to_text()).unwrap(), m);
        assert!(CellMask::parse("").is_err());
        assert!(CellMask::parse("2 2 1 1\n##\n").is_err());
        assert!(CellMask::parse("2 1 1 1\n#x\n").is_err());
        assert!(CellMask::parse("2 1 1\n##\n").is_err());
    }

    #[test]
    fn laplacian_entries() {
        let g = Grid::interval(-1.0, 1.0, 3).unwrap();
        let lap = laplacian_matrix(&g);
        assert_eq!(lap.diagonal(), vec![-8.0; 3]);
        assert_eq!(lap.get(0, 1), 4.0);
        assert_eq!(lap.get(1, 0), 4.0);
        assert_eq!(lap.get(0, 2), 0.0);

        let c = laplacian_matrix(&Grid::circle(4.0, 4).unwrap());
        assert_eq!(c.get(0, 3), 1.0);
        assert_eq!(c.get(0, 1), 1.0);
        assert_eq!(c.get(0, 0), -2.0);
        assert!(c.row_sums().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn advection_zero_drift_is_empty() {
        let g = Grid::interval(0.0, 1.0, 5).unwrap();
        let v = DriftField::zero(&g, 3.0).unwrap();
        for scheme in [AdvectionScheme::Upwind, AdvectionScheme::Hybrid] {
            assert_eq!(advection_matrix(&g, &v, scheme).unwrap().nnz(), 0);
        }
    }

    #[test]
    fn upwind_rows_follow_drift_sign() {
        let g = Grid::interval(-1.0, 1.0, 3).unwrap();
        let v = DriftField::from_fn(&g, 1.0, |_, _| [1.0, 0.0]).unwrap();
        let adv = advection_matrix(&g, &v, AdvectionScheme::Upwind).unwrap();
        // (u_{i+1} - u_i) / h with h = 0.5
        assert_eq!(adv.get(1, 1), -2.0);
        assert_eq!(adv.get(1, 2), 2.0);
        assert_eq!(adv.get(1, 0), 0.0);

        let v = DriftField::from_fn(&g, 1.0, |_, _| [-1.0, 0.0]).unwrap();
        let adv = advection_matrix(&g, &v, AdvectionScheme::Upwind).unwrap();
        // -(u_i - u_{i-1}) / h
        assert_eq!(adv.get(1, 1), -2.0);
        assert_eq!(adv.get(1, 0), 2.0);
        assert_eq!(adv.get(1, 2), 0.0);
    }

    #[test]
    fn hybrid_switches_on_cell_peclet() {
        let g = Grid::interval(-1.0, 1.0, 3).unwrap();
        let slow = DriftField::from_fn(&g, 1.0, |_, _| [1.0, 0.0]).unwrap();
        let adv = advection_matrix(&g, &slow, AdvectionScheme::Hybrid).unwrap();
        assert_eq!(adv.get(1, 1), 0.0);
        assert_eq!(adv.get(1, 2), 1.0);
        assert_eq!(adv.get(1, 0), -1.0);

        let fast = DriftField::from_fn(&g, 4.0, |_, _| [4.0, 0.0]).unwrap();
        let adv = advection_matrix(&g, &fast, AdvectionScheme::Hybrid).unwrap();
        assert_eq!(adv.get(1, 1), -8.0);
        assert_eq!(adv.get(1, 2), 8.0);
    }

    #[test]
    fn advection_is_exact_on_linear_functions() {
        let g = Grid::interval(-1.0, 1.0, 9).unwrap();
        let u = g.sample(|x, _| x);
        for cap in [0.5, 7.0] {
            let v = DriftField::from_fn(&g, cap, |_, _| [cap, 0.0]).unwrap();
            for scheme in [AdvectionScheme::Upwind, AdvectionScheme::Hybrid] {
                let out = advection_matrix(&g, &v, scheme).unwrap().matvec(&u);
                // rows touching the Dirichlet frame see 0 instead of x = +-1
                for val in &out[1..8] {
                    assert!(close(*val, cap, 1e-12), "{val} vs {cap}");
                }
            }
        }
    }

    #[test]
    fn advection_rejects_mismatched_drift() {
        let g = Grid::interval(0.0, 1.0, 4).unwrap();
        let other = Grid::interval(0.0, 1.0, 5).unwrap();
        let v = DriftField::zero(&other, 1.0).unwrap();
        assert!(advection_matrix(&g, &v, AdvectionScheme::Hybrid).is_err());
    }

    #[test]
    fn drift_cap_is_enforced() {
        let g = Grid::interval(0.0, 1.0, 4).unwrap();
        assert!(DriftField::from_fn(&g, 1.0, |_, _| [1.5, 0.0]).is_err());
        assert!(DriftField::from_fn(&g, 1.0, |_, _| [1.0 + 1e-13, 0.0]).is_ok());
        assert!(DriftField::zero(&g, -1.0).is_err());
    }

    #[test]
    fn gradient_of_constants_and_linears() {
        let c = Grid::circle(4.0, 12).unwrap();
        let g = gradient(&c, &[3.0; 12]);
        assert!(g.iter().all(|v| v[0] == 0.0));

        let iv = Grid::interval(0.0, 1.0, 10).unwrap();
        let g = gradient(&iv, &iv.sample(|x, _| x));
        assert!(g.iter().all(|v| close(v[0], 1.0, 1e-12)));

        let sq = Grid::masked_rectangle(CellMask {
            nx: 5,
            ny: 4,
            hx: 0.2,
            hy: 0.25,
            cells: vec![true; 20],
        })
        .unwrap();
        let g = gradient(&sq, &sq.sample(|x, y| x + 2.0 * y));
        for v in g {
            assert!(close(v[0], 1.0, 1e-12) && close(v[1], 2.0, 1e-12));
        }
    }

    #[test]
    fn pointwise_advection_matches_the_matrix() {
        let mask = CellMask::parse("4 3 0.25 0.3\n####\n#.##\n####\n").unwrap();
        let grids = [
            Grid::interval(-1.0, 1.0, 9).unwrap(),
            Grid::circle(3.0, 8).unwrap(),
            Grid::masked_rectangle(mask).unwrap(),
        ];
        for grid in &grids {
            let u = grid.sample(|x, y| 1.0 + (2.0 * x).sin() * (1.0 + y));
            // components straddle the 1/h switch on every axis
            let drift = DriftField::from_fn(grid, 6.0, |x, y| {
                [4.5 * (3.0 * x).cos(), 3.5 * (2.0 * y).sin()]
            })
            .unwrap();
            for scheme in [AdvectionScheme::Upwind, AdvectionScheme::Hybrid] {
                let vu = advection_matrix(grid, &drift, scheme).unwrap().matvec(&u);
                for (i, want) in vu.iter().enumerate() {
                    let got = advection_at(grid, &u, i, drift.vector(i), scheme);
                    assert!(
                        close(got, *want, 1e-12 * (1.0 + want.abs())),
                        "{i}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn switch_point_is_centered() {
        let h = 2.0 / 13.0;
        assert!(AdvectionScheme::Hybrid.centered(1.0 / h, h));
        assert!(AdvectionScheme::Hybrid.centered(6.5, h));
        assert!(!AdvectionScheme::Hybrid.centered(6.5 * (1.0 + 1e-9), h));
        assert!(!AdvectionScheme::Upwind.centered(0.0, h));
    }
}
