use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigUint;
use serde::Serialize;

use super::arc::{field_rank, Arc, PointMult};
use super::classify::{classify, SearchOptions};
use super::SearchError;
use crate::canon::{canonical_labeling, Labeling, Perm};
use crate::geometry::Geometry;

/// Orbit listings larger than this are skipped; counts still come from
/// the orbit-stabilizer theorem.
const LIST_LIMIT: usize = 1 << 16;

#[derive(Clone, Debug, Serialize)]
pub struct HyperovalCensus {
    pub size: usize,
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub count: BigUint,
    pub canonical_forms: usize,
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub collineation_order: BigUint,
    /// Stabilizer order of each class, in canonical-form order.
    pub stabilizer_orders: Vec<String>,
    #[serde(skip)]
    pub hyperovals: Option<Vec<Arc>>,
}

pub fn hyperoval_size(geom: &Geometry) -> usize {
    let (q, m) = (geom.ring.q, geom.ring.m);
    q.pow(m as u32) + q.pow(m as u32 - 1) + 1
}

/// All hyperovals of a plane: the classes come from `classify`, the
/// members from orbits under the collineation group.
pub fn hyperoval_census(geom: &Geometry) -> Result<HyperovalCensus, SearchError> {
    if geom.k != 2 {
        return Err(SearchError::NotPlane(geom.k));
    }
    let size = hyperoval_size(geom);
    let opts = SearchOptions { sets_only: true, min_size: size, ..SearchOptions::default() };
    let result = classify(geom, 2, &opts)?;
    let classes: Vec<_> = result.classes_at_max.iter().filter(|c| c.n == size).collect();

    let coll = collineations(geom);
    let order = coll.group_order();
    let mut count = BigUint::default();
    for c in &classes {
        count += &order / &c.aut_order;
    }
    let hyperovals = if count <= BigUint::from(LIST_LIMIT) {
        let mut all = vec![];
        for c in &classes {
            all.extend(point_orbit(geom, &coll.generators, &c.arc(geom)));
        }
        Some(all)
    } else {
        None
    };
    Ok(HyperovalCensus {
        size,
        count,
        canonical_forms: classes.len(),
        collineation_order: order,
        stabilizer_orders: classes.iter().map(|c| c.aut_order.to_string()).collect(),
        hyperovals,
    })
}

/// The collineation group, as automorphisms of the incidence graph with
/// points and hyperplanes colored apart.
pub fn collineations(geom: &Geometry) -> Labeling {
    let mut colors = vec![0; geom.num_points()];
    colors.extend(std::iter::repeat_n(1, geom.num_hyperplanes()));
    canonical_labeling(&geom.incidence_graph(colors))
}

/// Orbit of a point set under permutations of the incidence-graph vertices
/// (points come first, so they act on point ids directly).
pub fn point_orbit(geom: &Geometry, gens: &[Perm], arc: &Arc) -> Vec<Arc> {
    let start: Vec<u32> = arc.support().map(|p| p as u32).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut out = vec![];
    while let Some(set) = queue.pop_front() {
        for g in gens {
            let mut image: Vec<u32> = set.iter().map(|&p| g[p as usize]).collect();
            image.sort_unstable();
            if seen.insert(image.clone()) {
                queue.push_back(image);
            }
        }
        let pts: Vec<PointMult> = set.iter().map(|&p| PointMult { point: p as usize, mult: 1 }).collect();
        out.push(Arc::from_points(geom, &pts));
    }
    out.sort_by(|a, b| a.points().cmp(&b.points()));
    out
}

/// Checks that four points lie in distinct neighbor classes with no three
/// of those classes collinear in the quotient plane.
pub fn check_quadrangle(geom: &Geometry, quad: &[usize]) -> Result<(), SearchError> {
    if geom.k != 2 {
        return Err(SearchError::NotPlane(geom.k));
    }
    if quad.len() != 4 {
        return Err(SearchError::NotQuadrangle(format!("{} points given", quad.len())));
    }
    if let Some(&p) = quad.iter().find(|&&p| p >= geom.num_points()) {
        return Err(SearchError::NotQuadrangle(format!("no point with id {p}")));
    }
    let classes: BTreeSet<u32> = quad.iter().map(|&p| geom.neighbor_class[p]).collect();
    if classes.len() < 4 {
        return Err(SearchError::NotQuadrangle("two points are neighbors".into()));
    }
    for skip in 0..4 {
        let rows: Vec<Vec<u8>> = (0..4)
            .filter(|&i| i != skip)
            .map(|i| geom.quotient_points[geom.neighbor_class[quad[i]] as usize].clone())
            .collect();
        if field_rank(&geom.ring.field, rows) < 3 {
            return Err(SearchError::NotQuadrangle("three neighbor classes are collinear".into()));
        }
    }
    Ok(())
}

/// Every hyperoval through the quadrangle.
pub fn hyperoval_completions(geom: &Geometry, quad: &[usize]) -> Result<Vec<Arc>, SearchError> {
    check_quadrangle(geom, quad)?;
    let size = hyperoval_size(geom);
    let mut arc = Arc::empty(geom);
    for &p in quad {
        arc.add_point(geom, p);
    }
    if !arc.is_valid(2) {
        return Err(SearchError::NotQuadrangle("not a 2-arc".into()));
    }
    let mut out = vec![];
    extend(geom, &mut arc, 0, size, &mut out);
    Ok(out)
}

fn extend(geom: &Geometry, arc: &mut Arc, from: usize, size: usize, out: &mut Vec<Arc>) {
    if arc.n() == size {
        out.push(arc.clone());
        return;
    }
    let candidates: Vec<usize> = (from..geom.num_points())
        .filter(|&p| arc.mult(p) == 0 && geom.hyps_of_point[p].iter().all(|&h| arc.load(h as usize) < 2))
        .collect();
    if arc.n() + candidates.len() < size {
        return;
    }
    for p in candidates {
        if geom.hyps_of_point[p].iter().any(|&h| arc.load(h as usize) >= 2) {
            continue;
        }
        arc.add_point(geom, p);
        extend(geom, arc, p + 1, size, out);
        arc.remove_point(geom, p);
    }
}

/// The hyperoval containing a quadrangle.
pub fn complete_to_hyperoval(geom: &Geometry, quad: &[usize]) -> Result<Arc, SearchError> {
    hyperoval_completions(geom, quad)?.into_iter().next().ok_or(SearchError::NoCompletion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ring, RingName};

    #[test]
    fn quadrangle_checks() {
        let g = Geometry::build(ring(RingName::Z4), 2).unwrap();
        let id = |v: [u8; 3]| g.point_id(&v).unwrap();
        let quad = [id([1, 0, 0]), id([0, 1, 0]), id([0, 0, 1]), id([1, 1, 1])];
        assert!(check_quadrangle(&g, &quad).is_ok());
        let neighbors = [id([1, 0, 0]), id([1, 2, 0]), id([0, 0, 1]), id([1, 1, 1])];
        assert!(check_quadrangle(&g, &neighbors).is_err());
        let collinear = [id([1, 0, 0]), id([0, 1, 0]), id([1, 1, 0]), id([0, 0, 1])];
        assert!(check_quadrangle(&g, &collinear).is_err());
        assert!(check_quadrangle(&g, &quad[..3]).is_err());
    }
}
