//! Structure of the hyperovals of the Hjelmslev plane over Z4.

use std::collections::HashSet;

use serde::Serialize;

use crate::arcsearch::{
    check_quadrangle, collineations, complete_to_hyperoval, hyperoval_census, hyperoval_completions, point_orbit, Arc, SearchError,
};
use crate::canon::group::{compose, inverse, StabChain};
use crate::canon::{canonical_labeling, Labeling};
use crate::geometry::{normalize_right, Geometry};
use crate::report::Check;
use crate::ring::{ring, RingName};

#[derive(Clone, Debug, Serialize)]
pub struct Prop7Report {
    pub checks: Vec<Check>,
}

impl Prop7Report {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Collineations acting trivially on the quotient plane: automorphisms of
/// the incidence graph with every neighbor class as its own color.
pub fn quotient_kernel(geom: &Geometry) -> Labeling {
    let classes = geom.quotient_points.len() as u32;
    let mut colors: Vec<u32> = geom.neighbor_class.clone();
    colors.extend(std::iter::repeat_n(classes, geom.num_hyperplanes()));
    canonical_labeling(&geom.incidence_graph(colors))
}

/// Ordered 4-tuples of arc points forming a quadrangle.
pub fn ordered_quadrangles(geom: &Geometry, arc: &Arc) -> usize {
    let pts: Vec<usize> = arc.support().collect();
    let mut count = 0;
    for &a in &pts {
        for &b in &pts {
            for &c in &pts {
                for &d in &pts {
                    let q = [a, b, c, d];
                    let distinct = q.iter().collect::<HashSet<_>>().len() == 4;
                    if distinct && check_quadrangle(geom, &q).is_ok() {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

pub fn run() -> Result<Prop7Report, SearchError> {
    let geom = Geometry::build(ring(RingName::Z4), 2).expect("Z4 plane");
    let census = hyperoval_census(&geom)?;
    let mut checks = vec![
        Check::new("hyperovals", 256, &census.count),
        Check::new("canonical forms", 1, census.canonical_forms),
        Check::new("stabilizer order", "168", census.stabilizer_orders.join(",")),
        Check::new("collineation group order", 43008, &census.collineation_order),
    ];
    let all = census.hyperovals.unwrap_or_default();
    checks.push(Check::new("hyperovals listed", 256, all.len()));

    let coll = collineations(&geom);
    let n = geom.num_points() + geom.num_hyperplanes();
    let g_chain = StabChain::new(n, &coll.generators, &coll.base);
    let h = quotient_kernel(&geom);
    let h_chain = StabChain::new(n, &h.generators, &h.base);
    checks.push(Check::new("kernel order", 256, h_chain.order()));

    let in_g = h.generators.iter().all(|x| g_chain.contains(x));
    let normal = coll.generators.iter().all(|g| {
        let gi = inverse(g);
        h.generators.iter().all(|x| {
            let conj = compose(&compose(&gi, x), g);
            h_chain.contains(&conj)
        })
    });
    checks.push(Check::new("kernel is a normal subgroup", true, in_g && normal));

    if let Some(first) = all.first() {
        let orbit = point_orbit(&geom, &h.generators, first);
        let listed: HashSet<_> = all.iter().map(|a| a.points()).collect();
        let reached: HashSet<_> = orbit.iter().map(|a| a.points()).collect();
        checks.push(Check::new("kernel orbit of one hyperoval", 256, orbit.len()));
        // transitive with |H| equal to the orbit length, hence regular
        checks.push(Check::new("kernel orbit is every hyperoval", true, reached == listed));

        checks.push(Check::new("ordered quadrangles per hyperoval", 168, ordered_quadrangles(&geom, first)));
    }

    let id = |v: [u8; 3]| geom.point_id(&v).expect("point");
    let quad = [id([1, 0, 0]), id([0, 1, 0]), id([0, 0, 1]), id([1, 1, 1])];
    let completed = complete_to_hyperoval(&geom, &quad)?;
    checks.push(Check::new("completions of the standard quadrangle", 1, hyperoval_completions(&geom, &quad)?.len()));
    // written unnormalized, as (3:1:2) ~ (1:3:2)
    let expected: Vec<usize> = [[1, 2, 3], [3, 1, 2], [2, 3, 1]]
        .iter()
        .map(|v| geom.point_id(&normalize_right(&geom.ring, v).expect("free")).expect("point"))
        .collect();
    let fmt = |ids: &mut Vec<usize>| {
        ids.sort();
        ids.iter().map(|&p| geom.format_point(p)).collect::<Vec<_>>().join(",")
    };
    let mut added: Vec<usize> = completed.support().filter(|p| !quad.contains(p)).collect();
    checks.push(Check::new("completion of the standard quadrangle", fmt(&mut expected.clone()), fmt(&mut added)));
    Ok(Prop7Report { checks })
}
