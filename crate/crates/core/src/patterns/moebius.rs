use std::collections::BTreeSet;
use std::f64::consts::TAU;

use super::{bounding_box, normalize, space_from_cells, spec_error, PatternError};
use crate::palette::BrickName;
use crate::space::{Coord3, Dim3, Extent, Space3D};

/// Voxelized Moebius strip.
///
/// The centre circle has radius `major_radius` in the horizontal (x, z)
/// plane; the strip extends `half_width` cells to either side of it and is
/// `thickness` cells thick.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoebiusSpec {
    pub major_radius: u32,
    pub half_width: u32,
    pub thickness: u32,
    /// Space to place the strip in; defaults to its tight bounding box.
    pub dims: Option<Dim3>,
}

impl MoebiusSpec {
    pub fn new(major_radius: u32, half_width: u32, thickness: u32) -> Self {
        Self { major_radius, half_width, thickness, dims: None }
    }

    fn validate(&self) -> Result<(), PatternError> {
        if self.half_width < 1 {
            return Err(spec_error("moebius", "half width must be at least 1"));
        }
        if self.major_radius <= self.half_width {
            return Err(spec_error("moebius", "major radius must exceed the half width"));
        }
        if self.thickness < 1 {
            return Err(spec_error("moebius", "thickness must be at least 1"));
        }
        if self.major_radius > 4096 || self.thickness > 64 {
            return Err(spec_error("moebius", "strip too large"));
        }
        Ok(())
    }

    /// Point on the ideal surface at angle `u` and signed offset `v`.
    pub fn surface_point(&self, u: f64, v: f64) -> [f64; 3] {
        let r = f64::from(self.major_radius) + v * (u / 2.0).cos();
        [r * u.cos(), v * (u / 2.0).sin(), r * u.sin()]
    }

    /// Sample steps in `u` and `v`. Consecutive samples are under half a cell apart.
    pub fn sample_steps(&self) -> (usize, f64) {
        let around = (20.0 * f64::from(self.major_radius + self.half_width)).ceil() as usize;
        (around, 0.25)
    }
}

/// Cells of the strip in surface coordinates (may be negative).
fn raw_cells(spec: &MoebiusSpec) -> BTreeSet<Coord3> {
    let (around, dv) = spec.sample_steps();
    let w = f64::from(spec.half_width);
    let across = (2.0 * w / dv).round() as usize;
    let t2 = i64::from(spec.thickness).pow(2);
    let reach = i64::from(spec.thickness) / 2;
    // Discrete ball of diameter `thickness` around each rounded sample.
    let ball: Vec<Coord3> = (-reach..=reach)
        .flat_map(|x| (-reach..=reach).flat_map(move |y| (-reach..=reach).map(move |z| Coord3::new(x, y, z))))
        .filter(|o| 4 * (o.x * o.x + o.y * o.y + o.z * o.z) <= t2)
        .collect();
    let mut cells = BTreeSet::new();
    for i in 0..around {
        let u = TAU * i as f64 / around as f64;
        for j in 0..=across {
            let v = -w + dv * j as f64;
            let [x, y, z] = spec.surface_point(u, v);
            let q = Coord3::new(x.round() as i64, y.round() as i64, z.round() as i64);
            cells.extend(ball.iter().map(|o| Coord3::new(q.x + o.x, q.y + o.y, q.z + o.z)));
        }
    }
    cells
}

/// Strip cells translated so the minimum corner is the origin.
pub fn moebius_cells(spec: &MoebiusSpec) -> Result<BTreeSet<Coord3>, PatternError> {
    spec.validate()?;
    Ok(normalize(raw_cells(spec)))
}

pub fn moebius(spec: &MoebiusSpec, brick: &BrickName) -> Result<Space3D, PatternError> {
    let cells = moebius_cells(spec)?;
    let Some(dims) = spec.dims else {
        return space_from_cells(&cells, brick);
    };
    let bbox = bounding_box(cells.iter().copied()).expect("strip is never empty");
    let needed = Dim3::new(bbox.hi.x, bbox.hi.y, bbox.hi.z)?;
    if (0..3).any(|i| needed.axis(i) > dims.axis(i)) {
        return Err(PatternError::Overflow { needed: needed.to_string(), available: dims.to_string() });
    }
    let mut space = Space3D::new(dims);
    for c in cells {
        space.put_cell(c, brick)?;
    }
    Ok(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::VecDeque;

    fn components_26(cells: &BTreeSet<Coord3>) -> usize {
        let mut seen = BTreeSet::new();
        let mut count = 0;
        for &start in cells {
            if !seen.insert(start) {
                continue;
            }
            count += 1;
            let mut queue = VecDeque::from([start]);
            while let Some(c) = queue.pop_front() {
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        for dz in -1..=1 {
                            let n = Coord3::new(c.x + dx, c.y + dy, c.z + dz);
                            if cells.contains(&n) && seen.insert(n) {
                                queue.push_back(n);
                            }
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn single_component() {
        let cells = moebius_cells(&MoebiusSpec::new(12, 4, 2)).unwrap();
        assert_eq!(components_26(&cells), 1);
        let thin = moebius_cells(&MoebiusSpec::new(10, 3, 1)).unwrap();
        assert_eq!(components_26(&thin), 1);
    }

    #[test]
    fn cells_hug_the_surface() {
        let spec = MoebiusSpec::new(12, 4, 2);
        let raw = raw_cells(&spec);
        // Dense sampling of the ideal surface near each cell's azimuth; the
        // strip never crosses its own axis, so azimuth tracks `u`.
        for c in &raw {
            let azimuth = (c.z as f64).atan2(c.x as f64).rem_euclid(TAU);
            let mut best = f64::INFINITY;
            for i in -100..=100 {
                let u = azimuth + 0.003 * f64::from(i);
                for j in 0..=80 {
                    let p = spec.surface_point(u, -4.0 + 0.1 * f64::from(j));
                    let d = ((c.x as f64 - p[0]).powi(2) + (c.y as f64 - p[1]).powi(2) + (c.z as f64 - p[2]).powi(2)).sqrt();
                    best = best.min(d);
                }
            }
            assert!(best <= f64::from(spec.thickness), "{c} is {best} from the surface");
        }
    }

    #[test]
    fn sample_steps_stay_under_half_a_cell() {
        let spec = MoebiusSpec::new(12, 4, 2);
        let (around, dv) = spec.sample_steps();
        let du = TAU / around as f64;
        let mut worst: f64 = 0.0;
        for i in 0..around {
            let u = du * i as f64;
            for j in 0..=32 {
                let v = -4.0 + dv * f64::from(j);
                let a = spec.surface_point(u, v);
                let b = spec.surface_point(u + du, v);
                let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
                worst = worst.max(d);
            }
        }
        assert!(worst < 0.5 && dv < 0.5, "step {worst}");
    }

    #[test]
    fn deterministic_and_non_negative() {
        let spec = MoebiusSpec::new(8, 2, 1);
        let a = moebius(&spec, &BrickName::from("RED")).unwrap();
        let b = moebius(&spec, &BrickName::from("RED")).unwrap();
        assert_eq!(a.occupied(), b.occupied());
        assert!(a.iter().all(|(c, _)| c.x >= 0 && c.y >= 0 && c.z >= 0));
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(moebius_cells(&MoebiusSpec::new(4, 4, 1)), Err(PatternError::Spec { .. })));
        assert!(matches!(moebius_cells(&MoebiusSpec::new(4, 0, 1)), Err(PatternError::Spec { .. })));
        assert!(matches!(moebius_cells(&MoebiusSpec::new(8, 2, 0)), Err(PatternError::Spec { .. })));
        let cramped = MoebiusSpec { dims: Some(Dim3::new(4, 4, 4).unwrap()), ..MoebiusSpec::new(12, 4, 2) };
        assert!(matches!(moebius(&cramped, &BrickName::from("RED")), Err(PatternError::Overflow { .. })));
    }
}
