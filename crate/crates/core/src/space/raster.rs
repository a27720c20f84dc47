//! Integer rasterization of lines, circles and rings.

use super::Coord2;

/// Number of cells `line(p0, p1)` produces: `max(|dx|, |dy|) + 1`.
pub fn line_len(p0: Coord2, p1: Coord2) -> u64 {
    let dx = (p1.x as i128 - p0.x as i128).unsigned_abs();
    let dy = (p1.y as i128 - p0.y as i128).unsigned_abs();
    u64::try_from(dx.max(dy) + 1).unwrap_or(u64::MAX)
}

/// Bresenham segment from `p0` to `p1`, endpoints included.
///
/// Endpoints are put in a canonical order first so the cell set does not
/// depend on the direction the segment is drawn in.
pub fn line(p0: Coord2, p1: Coord2) -> Vec<Coord2> {
    let (a, b) = if p1 < p0 { (p1, p0) } else { (p0, p1) };
    let dx = (b.x as i128 - a.x as i128).abs();
    let dy = -(b.y as i128 - a.y as i128).abs();
    let sx = if a.x < b.x { 1 } else { -1 };
    let sy = if a.y < b.y { 1 } else { -1 };
    let mut err = dx + dy;
    let (mut x, mut y) = (a.x, a.y);
    let mut cells = Vec::with_capacity(usize::try_from(line_len(a, b)).unwrap_or(0).min(1 << 20));
    loop {
        cells.push(Coord2::new(x, y));
        if x == b.x && y == b.y {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
    cells
}

// round-half-up(d) <= r  <=>  d < r + 1/2  <=>  4(dx² + dy²) < (2r + 1)²
fn four_d2(dx: i64, dy: i64) -> i128 {
    4 * ((dx as i128) * (dx as i128) + (dy as i128) * (dy as i128))
}

fn odd_square(k: i64) -> i128 {
    let k = k as i128;
    (2 * k + 1).saturating_mul(2 * k + 1)
}

/// Whether the offset `(dx, dy)` rounds to a distance of at most `r`.
pub fn in_circle(dx: i64, dy: i64, r: i64) -> bool {
    four_d2(dx, dy) < odd_square(r)
}

/// Whether the offset `(dx, dy)` rounds to a distance of exactly `r`.
pub fn on_ring(dx: i64, dy: i64, r: i64) -> bool {
    in_circle(dx, dy, r) && (r == 0 || four_d2(dx, dy) >= odd_square(r - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offsets(r: i64, keep: fn(i64, i64, i64) -> bool) -> usize {
        let mut n = 0;
        for dx in -r - 1..=r + 1 {
            for dy in -r - 1..=r + 1 {
                n += usize::from(keep(dx, dy, r));
            }
        }
        n
    }

    #[test]
    fn circle_counts() {
        assert_eq!(offsets(0, in_circle), 1);
        assert_eq!(offsets(1, in_circle), 9);
        assert_eq!(offsets(2, in_circle), 21);
    }

    #[test]
    fn ring_counts() {
        assert_eq!(offsets(0, on_ring), 1);
        assert_eq!(offsets(1, on_ring), 8);
        assert_eq!(offsets(2, on_ring), 12);
        for (dx, dy) in [(2, 0), (0, -2), (2, 1), (-1, 2), (-2, -1)] {
            assert!(on_ring(dx, dy, 2));
        }
        assert!(!on_ring(2, 2, 2));
    }

    #[test]
    fn axis_and_diagonal_lines() {
        let l = line(Coord2::new(0, 0), Coord2::new(3, 0));
        assert_eq!(l, (0..4).map(|x| Coord2::new(x, 0)).collect::<Vec<_>>());
        let d = line(Coord2::new(0, 0), Coord2::new(3, 3));
        assert_eq!(d, (0..4).map(|i| Coord2::new(i, i)).collect::<Vec<_>>());
        assert_eq!(line(Coord2::new(0, 0), Coord2::new(4, 2)).len(), 5);
        assert_eq!(line(Coord2::new(5, 5), Coord2::new(5, 5)), vec![Coord2::new(5, 5)]);
    }

    #[test]
    fn huge_radius_does_not_overflow() {
        assert!(in_circle(3, 4, i64::MAX));
        assert!(!on_ring(3, 4, i64::MAX));
    }
}
