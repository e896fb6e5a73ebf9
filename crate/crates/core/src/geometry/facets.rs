//! Facet enumeration for hulls of ambient dimension ≤ 3.
//!
//! Facets are computed inside the cloud's affine frame, so a flat cloud
//! embedded in ℝ³ gets the facets of its polygon; normals are mapped back
//! to ambient coordinates and lie in the hull's direction space.

use super::{AffineFrame, PointCloud};
use crate::error::Error;
use crate::scalar::Float;
use crate::Result;

/// One bounding half-space of the hull, with outward unit normal:
/// `normal · x ≤ offset` for every hull point.
#[derive(Debug, Clone)]
pub struct Facet<S> {
    /// Cloud indices of the vertices spanning the facet.
    pub vertices: Vec<usize>,
    pub normal: Vec<S>,
    pub offset: S,
}

pub(super) fn enumerate<S: Float>(
    cloud: &PointCloud<S>,
    vertex_indices: &[usize],
    frame: &AffineFrame<S>,
) -> Result<Vec<Facet<S>>> {
    let projected: Vec<Vec<S>> = vertex_indices
        .iter()
        .map(|&i| frame.project(cloud.coords(i)))
        .collect();
    match frame.dim() {
        0 => Ok(Vec::new()),
        1 => Ok(segment_facets(cloud, vertex_indices, frame, &projected)),
        2 => Ok(polygon_facets(cloud, vertex_indices, frame, &projected)),
        3 => polytope_facets(cloud, vertex_indices, frame, &projected),
        k => Err(Error::DegenerateGeometry(format!(
            "facet enumeration not supported at affine dimension {k}"
        ))),
    }
}

fn make_facet<S: Float>(
    cloud: &PointCloud<S>,
    frame: &AffineFrame<S>,
    vertices: Vec<usize>,
    normal_in_frame: &[S],
) -> Facet<S> {
    let normal = frame.lift_gradient(normal_in_frame);
    let anchor = cloud.coords(vertices[0]);
    let offset = normal.iter().zip(anchor).map(|(&n, &x)| n * x).sum();
    Facet {
        vertices,
        normal,
        offset,
    }
}

fn segment_facets<S: Float>(
    cloud: &PointCloud<S>,
    vertex_indices: &[usize],
    frame: &AffineFrame<S>,
    projected: &[Vec<S>],
) -> Vec<Facet<S>> {
    let (lo, _) = projected
        .iter()
        .enumerate()
        .fold((0, S::infinity()), |acc, (i, p)| {
            if p[0] < acc.1 {
                (i, p[0])
            } else {
                acc
            }
        });
    let (hi, _) = projected
        .iter()
        .enumerate()
        .fold((0, S::neg_infinity()), |acc, (i, p)| {
            if p[0] > acc.1 {
                (i, p[0])
            } else {
                acc
            }
        });
    vec![
        make_facet(cloud, frame, vec![vertex_indices[lo]], &[-S::one()]),
        make_facet(cloud, frame, vec![vertex_indices[hi]], &[S::one()]),
    ]
}

fn polygon_facets<S: Float>(
    cloud: &PointCloud<S>,
    vertex_indices: &[usize],
    frame: &AffineFrame<S>,
    projected: &[Vec<S>],
) -> Vec<Facet<S>> {
    // monotone chain over the projected vertices
    let mut order: Vec<usize> = (0..projected.len()).collect();
    order.sort_by(|&a, &b| {
        projected[a][0]
            .partial_cmp(&projected[b][0])
            .unwrap()
            .then(projected[a][1].partial_cmp(&projected[b][1]).unwrap())
    });
    let cross = |o: &[S], a: &[S], b: &[S]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let build = |iter: Box<dyn Iterator<Item = usize> + '_>| {
        let mut chain: Vec<usize> = Vec::new();
        for i in iter {
            while chain.len() >= 2
                && cross(
                    &projected[chain[chain.len() - 2]],
                    &projected[chain[chain.len() - 1]],
                    &projected[i],
                ) <= S::zero()
            {
                chain.pop();
            }
            chain.push(i);
        }
        chain.pop();
        chain
    };
    let mut poly = build(Box::new(order.iter().copied()));
    poly.extend(build(Box::new(order.iter().rev().copied())));
    // counter-clockwise polygon: outward edge normal is the edge direction
    // rotated clockwise
    let mut facets = Vec::with_capacity(poly.len());
    for e in 0..poly.len() {
        let a = poly[e];
        let b = poly[(e + 1) % poly.len()];
        let dx = projected[b][0] - projected[a][0];
        let dy = projected[b][1] - projected[a][1];
        let len = (dx * dx + dy * dy).sqrt();
        if len <= S::of(1e-14) {
            continue;
        }
        let normal = [dy / len, -dx / len];
        facets.push(make_facet(
            cloud,
            frame,
            vec![vertex_indices[a], vertex_indices[b]],
            &normal,
        ));
    }
    facets
}

#[derive(Clone)]
struct Face<S> {
    v: [usize; 3],
    normal: [S; 3],
    offset: S,
}

/// Incremental 3D hull over the projected vertices. Returns triangles;
/// coplanar patches come out triangulated, which is fine for half-space
/// membership.
fn polytope_facets<S: Float>(
    cloud: &PointCloud<S>,
    vertex_indices: &[usize],
    frame: &AffineFrame<S>,
    projected: &[Vec<S>],
) -> Result<Vec<Facet<S>>> {
    let n = projected.len();
    let pt = |i: usize| -> [S; 3] { [projected[i][0], projected[i][1], projected[i][2]] };
    let sub = |a: [S; 3], b: [S; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let cross = |a: [S; 3], b: [S; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let dot = |a: [S; 3], b: [S; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let norm = |a: [S; 3]| dot(a, a).sqrt();

    let scale = (0..n).map(|i| norm(pt(i))).fold(S::one(), |m, v| m.max(v));
    let eps = S::of(1e-9) * scale;

    // initial tetrahedron from four affinely independent vertices
    let i0 = 0;
    let i1 = (1..n)
        .max_by(|&a, &b| {
            norm(sub(pt(a), pt(i0)))
                .partial_cmp(&norm(sub(pt(b), pt(i0))))
                .unwrap()
        })
        .ok_or_else(|| Error::DegenerateGeometry("too few hull vertices".into()))?;
    let axis = sub(pt(i1), pt(i0));
    let i2 = (0..n)
        .filter(|&i| i != i0 && i != i1)
        .max_by(|&a, &b| {
            norm(cross(axis, sub(pt(a), pt(i0))))
                .partial_cmp(&norm(cross(axis, sub(pt(b), pt(i0)))))
                .unwrap()
        })
        .ok_or_else(|| Error::DegenerateGeometry("too few hull vertices".into()))?;
    let base_normal = cross(axis, sub(pt(i2), pt(i0)));
    let i3 = (0..n)
        .filter(|&i| i != i0 && i != i1 && i != i2)
        .max_by(|&a, &b| {
            dot(base_normal, sub(pt(a), pt(i0)))
                .abs()
                .partial_cmp(&dot(base_normal, sub(pt(b), pt(i0))).abs())
                .unwrap()
        })
        .ok_or_else(|| Error::DegenerateGeometry("too few hull vertices".into()))?;
    if dot(base_normal, sub(pt(i3), pt(i0))).abs() <= eps {
        return Err(Error::DegenerateGeometry(
            "vertices are numerically coplanar despite affine dimension 3".into(),
        ));
    }

    let centroid = {
        let mut c = [S::zero(); 3];
        for &i in &[i0, i1, i2, i3] {
            let p = pt(i);
            for (cj, pj) in c.iter_mut().zip(p) {
                *cj += pj;
            }
        }
        c.map(|x| x / S::of(4.0))
    };

    // vertex order stays counterclockwise seen from outside, so every
    // directed edge appears exactly once across the surface
    let make_face = |a: usize, b: usize, c: usize| -> Option<Face<S>> {
        let nv = cross(sub(pt(b), pt(a)), sub(pt(c), pt(a)));
        let len = norm(nv);
        if len <= S::of(1e-13) * scale * scale {
            return None;
        }
        let mut v = [a, b, c];
        let mut normal = nv.map(|x| x / len);
        let mut offset = dot(normal, pt(a));
        if dot(normal, centroid) > offset {
            normal = normal.map(|x| -x);
            offset = -offset;
            v = [a, c, b];
        }
        Some(Face { v, normal, offset })
    };

    let mut faces: Vec<Face<S>> = [
        (i0, i1, i2),
        (i0, i1, i3),
        (i0, i2, i3),
        (i1, i2, i3),
    ]
    .iter()
    .filter_map(|&(a, b, c)| make_face(a, b, c))
    .collect();

    for p in 0..n {
        if p == i0 || p == i1 || p == i2 || p == i3 {
            continue;
        }
        let pp = pt(p);
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| dot(f.normal, pp) > f.offset + eps)
            .map(|(k, _)| k)
            .collect();
        if visible.is_empty() {
            continue;
        }
        // horizon: edges of visible faces whose mirrored edge belongs to a
        // hidden face
        let is_visible = {
            let mut mask = vec![false; faces.len()];
            for &k in &visible {
                mask[k] = true;
            }
            mask
        };
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for &k in &visible {
            let [a, b, c] = faces[k].v;
            for &(u, v) in &[(a, b), (b, c), (c, a)] {
                let twin_hidden = faces.iter().enumerate().any(|(j, f)| {
                    if is_visible[j] {
                        return false;
                    }
                    let [x, y, z] = f.v;
                    [(x, y), (y, z), (z, x)].contains(&(v, u))
                });
                if twin_hidden {
                    horizon.push((u, v));
                }
            }
        }
        let mut kept: Vec<Face<S>> = faces
            .into_iter()
            .enumerate()
            .filter(|(k, _)| !is_visible[*k])
            .map(|(_, f)| f)
            .collect();
        for (u, v) in horizon {
            // cone faces inherit the horizon edge direction; reordering
            // would break the twin-edge pairing
            let nv = cross(sub(pt(v), pt(u)), sub(pp, pt(u)));
            let len = norm(nv);
            if len <= S::of(1e-13) * scale * scale {
                continue;
            }
            let normal = nv.map(|x| x / len);
            kept.push(Face {
                v: [u, v, p],
                normal,
                offset: dot(normal, pt(u)),
            });
        }
        faces = kept;
    }

    Ok(faces
        .into_iter()
        .map(|f| {
            let verts = f.v.iter().map(|&i| vertex_indices[i]).collect();
            make_facet(cloud, frame, verts, &[f.normal[0], f.normal[1], f.normal[2]])
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::super::{convex_hull, PointCloud};

    #[test]
    fn cube_has_twelve_triangles() {
        let mut rows = Vec::new();
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    rows.push(vec![x, y, z]);
                }
            }
        }
        rows.push(vec![0.5, 0.5, 0.5]);
        let c = PointCloud::from_rows(rows).unwrap();
        let hull = convex_hull(&c).unwrap();
        assert_eq!(hull.vertex_indices.len(), 8);
        let facets = hull.facets.as_ref().unwrap();
        assert_eq!(facets.len(), 12);
        // every cloud point satisfies every half-space
        for i in 0..c.len() {
            for f in facets {
                let v: f64 = f.normal.iter().zip(c.coords(i)).map(|(n, x)| n * x).sum();
                assert!(v <= f.offset + 1e-9);
            }
        }
    }

    #[test]
    fn flat_triangle_in_3d_gets_polygon_facets() {
        let c = PointCloud::from_rows(vec![
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![0.25, 0.25, 1.0],
        ])
        .unwrap();
        let hull = convex_hull(&c).unwrap();
        assert_eq!(hull.affine_dim, 2);
        assert_eq!(hull.vertex_indices, vec![0, 1, 2]);
        let facets = hull.facets.as_ref().unwrap();
        assert_eq!(facets.len(), 3);
        assert!(hull.contains_by_facets(&[0.2, 0.2, 1.0], 1e-9).unwrap());
        assert!(!hull.contains_by_facets(&[0.2, 0.2, 1.1], 1e-9).unwrap());
        assert!(!hull.contains_by_facets(&[0.9, 0.9, 1.0], 1e-9).unwrap());
    }

    #[test]
    fn segment_in_3d() {
        let c = PointCloud::from_rows(vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 1.0, 1.0],
            vec![0.5, 0.5, 0.5],
        ])
        .unwrap();
        let hull = convex_hull(&c).unwrap();
        assert_eq!(hull.affine_dim, 1);
        assert_eq!(hull.vertex_indices, vec![0, 1]);
        assert_eq!(hull.facets.as_ref().unwrap().len(), 2);
        assert!(hull.contains_by_facets(&[0.3, 0.3, 0.3], 1e-9).unwrap());
        assert!(!hull.contains_by_facets(&[1.2, 1.2, 1.2], 1e-9).unwrap());
        assert!(!hull.contains_by_facets(&[0.5, 0.5, 0.6], 1e-9).unwrap());
    }
}
