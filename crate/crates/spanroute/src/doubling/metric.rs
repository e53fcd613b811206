//! Finite point metrics and per-point distance labels.
//!
//! Distances are normalized so the closest pair is at distance 1; the
//! aspect ratio `D` is then the largest pairwise distance. Distance labels
//! let two points estimate their distance from the labels alone: the
//! default schemes are exact (scaled coordinates, or a full matrix row),
//! so the estimation slack `delta` is 0. Approximate schemes plug in
//! through the same interface.

use crate::error::{Error, Result};

/// An n-point metric: planar points, or an explicit distance matrix.
#[derive(Debug, Clone)]
pub enum PointMetric {
    Euclidean2D { pts: Vec<[f64; 2]>, diameter: f64 },
    Explicit { n: usize, dist: Vec<f64>, diameter: f64 },
}

impl PointMetric {
    /// Builds a planar metric, rescaling so the closest pair is at
    /// distance 1.
    pub fn from_points(raw: Vec<[f64; 2]>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidMetric("no points".into()));
        }
        if raw.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidMetric("non-finite coordinate".into()));
        }
        if raw.len() == 1 {
            return Ok(PointMetric::Euclidean2D {
                pts: raw,
                diameter: 0.0,
            });
        }
        let mut min = f64::INFINITY;
        for i in 0..raw.len() {
            for j in i + 1..raw.len() {
                min = min.min(euclid(raw[i], raw[j]));
            }
        }
        if min <= 0.0 {
            return Err(Error::InvalidMetric("coincident points".into()));
        }
        let pts: Vec<[f64; 2]> = raw
            .into_iter()
            .map(|[x, y]| [x / min, y / min])
            .collect();
        let mut diameter: f64 = 0.0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                diameter = diameter.max(euclid(pts[i], pts[j]));
            }
        }
        Ok(PointMetric::Euclidean2D { pts, diameter })
    }

    /// Builds an explicit metric from a full matrix, validating symmetry,
    /// zero diagonal, positivity and the triangle inequality, then
    /// rescaling so the closest pair is at distance 1.
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMetric("empty matrix".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMetric(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        let mut min = f64::INFINITY;
        for i in 0..n {
            if rows[i][i] != 0.0 {
                return Err(Error::InvalidMetric(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let d = rows[i][j];
                if !d.is_finite() || (i != j && d <= 0.0) {
                    return Err(Error::InvalidMetric(format!("bad distance at ({i},{j})")));
                }
                if d != rows[j][i] {
                    return Err(Error::InvalidMetric(format!("asymmetry at ({i},{j})")));
                }
                if i != j {
                    min = min.min(d);
                }
            }
        }
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    if rows[i][j] > rows[i][k] + rows[k][j] + 1e-12 * rows[i][j] {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails for ({i},{k},{j})"
                        )));
                    }
                }
            }
        }
        if n == 1 {
            return Ok(PointMetric::Explicit {
                n,
                dist: vec![0.0],
                diameter: 0.0,
            });
        }
        let mut dist = Vec::with_capacity(n * n);
        let mut diameter: f64 = 0.0;
        for row in &rows {
            for &d in row {
                let scaled = d / min;
                diameter = diameter.max(scaled);
                dist.push(scaled);
            }
        }
        Ok(PointMetric::Explicit { n, dist, diameter })
    }

    pub fn len(&self) -> usize {
        match self {
            PointMetric::Euclidean2D { pts, .. } => pts.len(),
            PointMetric::Explicit { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Normalized distance between two points.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match self {
            PointMetric::Euclidean2D { pts, .. } => euclid(pts[i], pts[j]),
            PointMetric::Explicit { n, dist, .. } => dist[i * n + j],
        }
    }

    /// Largest normalized pairwise distance (the aspect ratio).
    pub fn diameter(&self) -> f64 {
        match self {
            PointMetric::Euclidean2D { diameter, .. } => *diameter,
            PointMetric::Explicit { diameter, .. } => *diameter,
        }
    }

    /// The default exact distance label of point `p`.
    pub fn distance_label(&self, p: usize) -> DistanceLabel {
        match self {
            PointMetric::Euclidean2D { pts, .. } => DistanceLabel::Coords(pts[p]),
            PointMetric::Explicit { n, dist, .. } => DistanceLabel::Row {
                id: p,
                row: dist[p * n..(p + 1) * n].to_vec(),
            },
        }
    }

    pub fn distance_labels(&self) -> Vec<DistanceLabel> {
        (0..self.len()).map(|p| self.distance_label(p)).collect()
    }
}

fn euclid(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    (dx * dx + dy * dy).sqrt()
}

/// Per-point data from which pairwise distances can be estimated with
/// `d <= d_est <= (1 + delta) * d`. Both default schemes are exact.
#[derive(Debug, Clone)]
pub enum DistanceLabel {
    Coords([f64; 2]),
    Row { id: usize, row: Vec<f64> },
}

impl DistanceLabel {
    /// Distance estimate from two labels alone.
    pub fn estimate(&self, other: &DistanceLabel) -> f64 {
        match (self, other) {
            (DistanceLabel::Coords(a), DistanceLabel::Coords(b)) => euclid(*a, *b),
            (DistanceLabel::Row { row, .. }, DistanceLabel::Row { id, .. }) => row[*id],
            _ => panic!("distance labels from different schemes"),
        }
    }

    /// Estimation slack of the scheme; 0 for the exact defaults.
    pub fn delta(&self) -> f64 {
        0.0
    }

    /// How many numbers the label stores (reported by the storage
    /// accounting alongside the structural bits).
    pub fn numbers(&self) -> usize {
        match self {
            DistanceLabel::Coords(_) => 2,
            DistanceLabel::Row { row, .. } => row.len(),
        }
    }
}

/// Points file: either `id x y` lines, or an explicit matrix introduced by
/// a single `n` line followed by n rows of n distances. `#` starts a
/// comment line.
pub fn parse_points(text: &str) -> Result<PointMetric> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let (first_no, first) = *lines.first().ok_or(Error::Parse {
        line: 0,
        msg: "empty points file".into(),
    })?;
    let tokens: Vec<&str> = first.split_whitespace().collect();
    if tokens.len() == 1 {
        let n: usize = tokens[0].parse().map_err(|_| Error::Parse {
            line: first_no,
            msg: "invalid point count".into(),
        })?;
        if lines.len() != n + 1 {
            return Err(Error::Parse {
                line: first_no,
                msg: format!("expected {n} matrix rows"),
            });
        }
        let mut rows = Vec::with_capacity(n);
        for &(no, line) in &lines[1..] {
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::Parse {
                        line: no,
                        msg: "invalid distance".into(),
                    })
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        PointMetric::from_matrix(rows)
    } else {
        let mut pts = vec![None; lines.len()];
        for &(no, line) in &lines {
            let mut it = line.split_whitespace();
            let bad = |what: &str| Error::Parse {
                line: no,
                msg: format!("invalid {what}"),
            };
            let id: usize = it
                .next()
                .ok_or_else(|| bad("id"))?
                .parse()
                .map_err(|_| bad("id"))?;
            let x: f64 = it
                .next()
                .ok_or_else(|| bad("x"))?
                .parse()
                .map_err(|_| bad("x"))?;
            let y: f64 = it
                .next()
                .ok_or_else(|| bad("y"))?
                .parse()
                .map_err(|_| bad("y"))?;
            if id >= pts.len() || pts[id].is_some() {
                return Err(Error::Parse {
                    line: no,
                    msg: format!("point ids must be dense and unique, got {id}"),
                });
            }
            pts[id] = Some([x, y]);
        }
        PointMetric::from_points(pts.into_iter().map(Option::unwrap).collect())
    }
}

/// Formats raw planar points as `id x y` lines.
pub fn format_points(pts: &[[f64; 2]]) -> String {
    let mut out = String::new();
    for (i, p) in pts.iter().enumerate() {
        out.push_str(&format!("{i} {:.16e} {:.16e}\n", p[0], p[1]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_closest_pair_to_one() {
        let m = PointMetric::from_points(vec![[0.0, 0.0], [0.5, 0.0], [2.0, 0.0]]).unwrap();
        assert!((m.distance(0, 1) - 1.0).abs() < 1e-12);
        assert!((m.diameter() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_coincident_points() {
        assert!(PointMetric::from_points(vec![[1.0, 1.0], [1.0, 1.0]]).is_err());
    }

    #[test]
    fn matrix_validation() {
        let ok = PointMetric::from_matrix(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        assert!(ok.is_ok());
        let asym = PointMetric::from_matrix(vec![vec![0.0, 1.0], vec![2.0, 0.0]]);
        assert!(asym.is_err());
        let tri = PointMetric::from_matrix(vec![
            vec![0.0, 1.0, 9.0],
            vec![1.0, 0.0, 1.0],
            vec![9.0, 1.0, 0.0],
        ]);
        assert!(tri.is_err());
    }

    #[test]
    fn labels_estimate_exact_distances() {
        let m = PointMetric::from_points(vec![[0.0, 0.0], [3.0, 4.0], [6.0, 8.0]]).unwrap();
        let labels = m.distance_labels();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(labels[i].estimate(&labels[j]), m.distance(i, j));
            }
        }
    }

    #[test]
    fn points_roundtrip() {
        let pts = vec![[0.0, 0.25], [1.0, 2.0]];
        let text = format_points(&pts);
        let m = parse_points(&text).unwrap();
        assert_eq!(m.len(), 2);
    }
}
