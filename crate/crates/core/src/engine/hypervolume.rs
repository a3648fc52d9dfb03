//! Exact hypervolume of two-objective minimization fronts.

use crate::error::{Error, Result};

fn check(front: &[[f64; 2]], reference: [f64; 2]) -> Result<()> {
    if !(reference[0].is_finite() && reference[1].is_finite()) {
        return Err(Error::InvalidArgument("reference point must be finite".into()));
    }
    for p in front {
        if !(p[0].is_finite() && p[1].is_finite()) || p[0] > reference[0] || p[1] > reference[1] {
            return Err(Error::InvalidReference {
                point: p.to_vec(),
                reference: reference.to_vec(),
            });
        }
    }
    Ok(())
}

/// Non-dominated subset sorted by the first objective ascending.
fn staircase(front: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = front.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last().is_none_or(|q| p[1] < q[1]) {
            out.push(p);
        }
    }
    out
}

/// Area dominated by `front` and bounded by `reference`.
pub fn hypervolume_2d(front: &[[f64; 2]], reference: [f64; 2]) -> Result<f64> {
    check(front, reference)?;
    let stairs = staircase(front);
    let mut area = 0.0;
    for (i, p) in stairs.iter().enumerate() {
        let next_x = stairs.get(i + 1).map_or(reference[0], |q| q[0]);
        area += (next_x - p[0]) * (reference[1] - p[1]);
    }
    Ok(area)
}

/// Contribution of `front[index]`: the box between the point and its
/// neighbors on the non-dominated staircase, with the reference standing in
/// at the ends. Points that are dominated by or equal to another point
/// contribute zero. On a mutually non-dominated front this is the volume lost
/// by removing the point.
pub fn hypervolume_contribution(
    front: &[[f64; 2]],
    index: usize,
    reference: [f64; 2],
) -> Result<f64> {
    check(front, reference)?;
    let p = *front.get(index).ok_or(Error::IndexOutOfRange {
        what: "front point",
        index,
        len: front.len(),
    })?;
    let shadowed = front
        .iter()
        .enumerate()
        .any(|(j, q)| j != index && q[0] <= p[0] && q[1] <= p[1]);
    if shadowed {
        return Ok(0.0);
    }
    let stairs = staircase(front);
    let pos = stairs
        .iter()
        .position(|q| *q == p)
        .expect("undominated point is on the staircase");
    let right_x = stairs.get(pos + 1).map_or(reference[0], |q| q[0]);
    let upper_y = if pos == 0 { reference[1] } else { stairs[pos - 1][1] };
    Ok((right_x - p[0]) * (upper_y - p[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FRONT: [[f64; 2]; 3] = [[1.0, 3.0], [2.0, 2.0], [3.0, 1.0]];

    #[test]
    fn middle_contribution() {
        assert_eq!(hypervolume_contribution(&FRONT, 1, [4.0, 4.0]).unwrap(), 1.0);
    }

    #[test]
    fn staircase_area() {
        // boxes: (2-1)(4-3) + (3-2)(4-2) + (4-3)(4-1)
        assert_eq!(hypervolume_2d(&FRONT, [4.0, 4.0]).unwrap(), 6.0);
    }

    #[test]
    fn unit_box() {
        assert_eq!(hypervolume_2d(&[[1.0, 1.0]], [2.0, 2.0]).unwrap(), 1.0);
        assert_eq!(hypervolume_2d(&[], [2.0, 2.0]).unwrap(), 0.0);
    }

    #[test]
    fn dominated_and_duplicate_points() {
        let f = [[1.0, 1.0], [2.0, 2.0], [1.0, 1.0]];
        assert_eq!(hypervolume_2d(&f, [3.0, 3.0]).unwrap(), 4.0);
        for i in 0..3 {
            assert_eq!(hypervolume_contribution(&f, i, [3.0, 3.0]).unwrap(), 0.0);
        }
    }

    #[test]
    fn invalid_reference_names_point() {
        match hypervolume_2d(&FRONT, [2.5, 4.0]) {
            Err(Error::InvalidReference { point, .. }) => assert_eq!(point, vec![3.0, 1.0]),
            other => panic!("{other:?}"),
        }
    }
}
