//! Instance generators: the parallel-planes gadget with its known exact
//! certificate, random families for sweeps, and degenerate stress families.
//!
//! The gadget places k+1 parallel (d−k)-dimensional affine planes, each
//! carrying the vertices of a (d−k)-simplex plus its barycenter. The only
//! intersecting split of such a set is {all vertices} | {barycenter}, so any
//! transversal flat must pass through every barycenter; when the barycenters
//! affinely span a k-flat, that flat is the unique solution and the
//! certificate can be written down exactly. All gadget arithmetic is rational
//! end to end: this is the one family where exact acceptance is demanded.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact::{add, RatMat};
use crate::geom::ExactSubspace;
use crate::scalar::{rat, rat_from_f64, rat_int, rat_zero, Rat};
use crate::solver::{Bipartition, Certificate, Instance, SetSplit};

#[derive(Debug, Clone, Error)]
pub enum GenError {
    /// The barycenters fail to span an affine k-flat.
    #[error("degenerate spec: {0}")]
    DegenerateSpec(String),
    #[error("invalid spec: {0}")]
    Invalid(String),
}

/// Parameters of the gadget construction. The planes are translates of the
/// axis-aligned direction space D = span{e_0..e_{d−k−1}}; `offsets[i]` places
/// plane A_i and `shear`, when present, shifts each simplex inside its own
/// plane (coordinates in D). The default spec uses a small rational shear so
/// the barycenter flat is not axis-aligned.
#[derive(Debug, Clone)]
pub struct GadgetSpec {
    pub d: usize,
    pub k: usize,
    /// k+1 translation vectors in R^d placing the parallel planes.
    pub offsets: Vec<Vec<Rat>>,
    /// Edge scale of each simplex.
    pub scale: Rat,
    /// Optional in-plane shifts, one (d−k)-vector per plane.
    pub shear: Option<Vec<Vec<Rat>>>,
}

impl GadgetSpec {
    /// Default gadget: plane i offset along e_{d−k−1+i}, sheared by i/8 along
    /// e_0 inside its plane, simplex edge 2.
    pub fn standard(d: usize, k: usize) -> Result<Self, GenError> {
        if d == 0 || k >= d {
            return Err(GenError::Invalid(format!(
                "need 0 <= k <= d-1, got d={d}, k={k}"
            )));
        }
        let m = d - k;
        let mut offsets = Vec::with_capacity(k + 1);
        let mut shear = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let mut o = vec![rat_zero(); d];
            if i > 0 {
                o[m - 1 + i] = rat_int(1);
            }
            offsets.push(o);
            let mut s = vec![rat_zero(); m];
            s[0] = rat(i as i64, 8);
            shear.push(s);
        }
        Ok(GadgetSpec {
            d,
            k,
            offsets,
            scale: rat_int(2),
            shear: Some(shear),
        })
    }
}

/// Builds the gadget instance and its exact certificate.
pub fn gen_gadget(spec: &GadgetSpec) -> Result<(Instance, Certificate), GenError> {
    let (d, k) = (spec.d, spec.k);
    if d == 0 || k >= d {
        return Err(GenError::Invalid(format!(
            "need 0 <= k <= d-1, got d={d}, k={k}"
        )));
    }
    let m = d - k;
    if spec.offsets.len() != k + 1 {
        return Err(GenError::Invalid(format!(
            "expected {} offsets, got {}",
            k + 1,
            spec.offsets.len()
        )));
    }
    if spec.offsets.iter().any(|o| o.len() != d) {
        return Err(GenError::Invalid("offset of wrong dimension".into()));
    }
    if let Some(shear) = &spec.shear {
        if shear.len() != k + 1 || shear.iter().any(|s| s.len() != m) {
            return Err(GenError::Invalid(
                "shear must provide one (d-k)-vector per plane".into(),
            ));
        }
    }

    // Corner simplex in the plane direction space: u_0 = 0, u_j = scale·e_{j−1}.
    let vertex = |j: usize| -> Vec<Rat> {
        let mut u = vec![rat_zero(); d];
        if j > 0 {
            u[j - 1] = spec.scale.clone();
        }
        u
    };
    let in_plane = |i: usize| -> Vec<Rat> {
        let mut v = vec![rat_zero(); d];
        if let Some(shear) = &spec.shear {
            for (c, s) in v.iter_mut().zip(&shear[i]) {
                *c = s.clone();
            }
        }
        v
    };

    let mut sets = Vec::with_capacity(k + 1);
    let mut barycenters = Vec::with_capacity(k + 1);
    let count = rat_int((m + 1) as i64);
    for i in 0..=k {
        let base = add(&spec.offsets[i], &in_plane(i));
        let mut set = Vec::with_capacity(m + 2);
        let mut bary = vec![rat_zero(); d];
        for j in 0..=m {
            let v = add(&base, &vertex(j));
            for (b, c) in bary.iter_mut().zip(&v) {
                *b += c;
            }
            set.push(v);
        }
        let bary: Vec<Rat> = bary.into_iter().map(|c| c / &count).collect();
        set.push(bary.clone());
        barycenters.push(bary);
        sets.push(set);
    }

    // Direction of the barycenter flat; must have affine dimension k.
    let diffs: Vec<Vec<Rat>> = barycenters[1..]
        .iter()
        .map(|b| crate::exact::sub(b, &barycenters[0]))
        .collect();
    let l_basis = if k == 0 {
        RatMat::identity(d)
    } else {
        let w = RatMat::from_cols(&diffs);
        if w.rank() != k {
            return Err(GenError::DegenerateSpec(format!(
                "barycenters span a flat of dimension {} (need {k})",
                w.rank()
            )));
        }
        RatMat::from_cols(&w.transpose().nullspace())
    };
    let sub = ExactSubspace::new(l_basis.clone())
        .expect("kernel basis has full column rank");
    let common_point = sub
        .project(&barycenters[0])
        .expect("dimensions agree");

    let uniform = vec![rat_int(1) / &count; m + 1];
    let splits = vec![SetSplit::new((0..=m).collect(), vec![m + 1]); k + 1];
    let weights = vec![(uniform, vec![rat_int(1)]); k + 1];

    let instance = Instance::new(d, k, sets)
        .map_err(|e| GenError::Invalid(e.to_string()))?;
    let certificate = Certificate {
        bipartitions: Bipartition { splits },
        l_basis,
        common_point,
        weights,
        residual: 0.0,
    };
    Ok((instance, certificate))
}

/// Coordinate distribution for random instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    UnitCube,
    Gaussian,
}

impl std::str::FromStr for Distribution {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "unit-cube" => Ok(Distribution::UnitCube),
            "gaussian" => Ok(Distribution::Gaussian),
            other => Err(format!(
                "unknown distribution {other:?} (expected unit-cube or gaussian)"
            )),
        }
    }
}

/// Random instance with i.i.d. coordinates, deterministic per seed. The drawn
/// doubles are stored as exact dyadic rationals so exact-mode tools can
/// consume the instance unchanged.
pub fn gen_random(d: usize, k: usize, dist: Distribution, seed: u64) -> Result<Instance, GenError> {
    if d == 0 || k >= d {
        return Err(GenError::Invalid(format!(
            "need 0 <= k <= d-1, got d={d}, k={k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_set = d - k + 2;
    let sets = (0..=k)
        .map(|_| {
            (0..per_set)
                .map(|_| {
                    (0..d)
                        .map(|_| {
                            let x: f64 = match dist {
                                Distribution::UnitCube => rng.gen::<f64>(),
                                Distribution::Gaussian => {
                                    rng.sample(rand_distr::StandardNormal)
                                }
                            };
                            rat_from_f64(x).expect("finite sample")
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Instance::new(d, k, sets).map_err(|e| GenError::Invalid(e.to_string()))
}

/// Named degeneracies that stay inside the theorem's hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegenerateKind {
    /// All points of set 0 on one line.
    CollinearSet,
    /// Two identical points in set 0.
    RepeatedPoint,
    /// Every point of every set in one 2-plane.
    CoplanarAll,
}

impl DegenerateKind {
    pub const ALL: [DegenerateKind; 3] = [
        DegenerateKind::CollinearSet,
        DegenerateKind::RepeatedPoint,
        DegenerateKind::CoplanarAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DegenerateKind::CollinearSet => "collinear-set",
            DegenerateKind::RepeatedPoint => "repeated-point",
            DegenerateKind::CoplanarAll => "coplanar-all",
        }
    }
}

impl std::str::FromStr for DegenerateKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "collinear-set" => Ok(DegenerateKind::CollinearSet),
            "repeated-point" => Ok(DegenerateKind::RepeatedPoint),
            "coplanar-all" => Ok(DegenerateKind::CoplanarAll),
            other => Err(format!(
                "unknown degeneracy {other:?} (expected collinear-set, repeated-point or coplanar-all)"
            )),
        }
    }
}

/// Instance exhibiting the named degeneracy; the theorem still guarantees a
/// solution, so the solver must cope.
pub fn gen_degenerate(
    d: usize,
    k: usize,
    kind: DegenerateKind,
    seed: u64,
) -> Result<Instance, GenError> {
    let base = gen_random(d, k, Distribution::UnitCube, seed)?;
    let mut sets: Vec<Vec<Vec<Rat>>> = base.sets().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xDE6E);
    let dyadic = |rng: &mut ChaCha8Rng| rat_from_f64(rng.gen::<f64>()).expect("finite");
    match kind {
        DegenerateKind::RepeatedPoint => {
            sets[0][1] = sets[0][0].clone();
        }
        DegenerateKind::CollinearSet => {
            let origin = sets[0][0].clone();
            let dir = crate::exact::sub(&sets[0][1], &origin);
            for (a, point) in sets[0].iter_mut().enumerate() {
                let t = rat_int(a as i64);
                *point = add(&origin, &crate::exact::scale(&dir, &t));
            }
        }
        DegenerateKind::CoplanarAll => {
            let origin = sets[0][0].clone();
            let dir1 = crate::exact::sub(&sets[0][1], &origin);
            let dir2 = crate::exact::sub(&sets[0][2], &origin);
            for set in sets.iter_mut() {
                for point in set.iter_mut() {
                    let s = dyadic(&mut rng);
                    let t = dyadic(&mut rng);
                    *point = add(
                        &origin,
                        &add(
                            &crate::exact::scale(&dir1, &s),
                            &crate::exact::scale(&dir2, &t),
                        ),
                    );
                }
            }
        }
    }
    Instance::new(d, k, sets).map_err(|e| GenError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Tolerances;
    use crate::solver::{verify, VerifyMode};

    #[test]
    fn gadget_matches_hand_construction_2_1() {
        // Planes y=0 and y=1, unsheared segments of length 2.
        let spec = GadgetSpec {
            d: 2,
            k: 1,
            offsets: vec![
                vec![rat_int(0), rat_int(0)],
                vec![rat_int(0), rat_int(1)],
            ],
            scale: rat_int(2),
            shear: None,
        };
        let (instance, cert) = gen_gadget(&spec).unwrap();
        assert_eq!(
            instance.sets()[0],
            vec![
                vec![rat_int(0), rat_int(0)],
                vec![rat_int(2), rat_int(0)],
                vec![rat_int(1), rat_int(0)],
            ]
        );
        assert_eq!(
            instance.sets()[1],
            vec![
                vec![rat_int(0), rat_int(1)],
                vec![rat_int(2), rat_int(1)],
                vec![rat_int(1), rat_int(1)],
            ]
        );
        // Flat is the vertical line x = 1: L = span{e_0}, p = 1.
        assert_eq!(cert.l_basis.column(0), vec![rat_int(1), rat_int(0)]);
        assert_eq!(cert.common_point, vec![rat_int(1)]);
        assert_eq!(cert.bipartitions.splits[0], SetSplit::new(vec![0, 1], vec![2]));
        let r = verify(&instance, &cert, 1e-6, VerifyMode::RequireExact, &Tolerances::default())
            .unwrap();
        assert!(r.accepted && r.exact);
    }

    #[test]
    fn standard_gadgets_verify_exactly() {
        for (d, k) in [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3), (5, 2)] {
            let spec = GadgetSpec::standard(d, k).unwrap();
            let (instance, cert) = gen_gadget(&spec).unwrap();
            let m = d - k;
            for split in &cert.bipartitions.splits {
                assert_eq!(split.first, (0..=m).collect::<Vec<_>>());
                assert_eq!(split.second, vec![m + 1]);
            }
            let r = verify(
                &instance,
                &cert,
                1e-6,
                VerifyMode::RequireExact,
                &Tolerances::default(),
            )
            .unwrap();
            assert!(r.accepted && r.exact, "gadget ({d},{k}) must verify exactly");
            assert_eq!(r.residual, 0.0);
        }
    }

    #[test]
    fn coincident_planes_are_degenerate() {
        let mut spec = GadgetSpec::standard(3, 1).unwrap();
        spec.offsets[1] = spec.offsets[0].clone();
        spec.shear = None;
        match gen_gadget(&spec) {
            Err(GenError::DegenerateSpec(_)) => {}
            other => panic!("expected DegenerateSpec, got {other:?}"),
        }
    }

    #[test]
    fn random_is_deterministic_per_seed() {
        let a = gen_random(3, 1, Distribution::UnitCube, 7).unwrap();
        let b = gen_random(3, 1, Distribution::UnitCube, 7).unwrap();
        let c = gen_random(3, 1, Distribution::UnitCube, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.sets().len(), 2);
        assert_eq!(a.sets()[0].len(), 4);
        // Unit-cube coordinates stay in [0, 1].
        for set in a.sets() {
            for p in set {
                for c in p {
                    assert!(*c >= rat_int(0) && *c <= rat_int(1));
                }
            }
        }
        let g = gen_random(3, 2, Distribution::Gaussian, 7).unwrap();
        assert_eq!(g.sets().len(), 3);
    }

    #[test]
    fn degenerate_families_have_their_shape() {
        let rep = gen_degenerate(2, 1, DegenerateKind::RepeatedPoint, 5).unwrap();
        assert_eq!(rep.sets()[0][0], rep.sets()[0][1]);

        let col = gen_degenerate(3, 1, DegenerateKind::CollinearSet, 5).unwrap();
        let pts: Vec<Vec<Rat>> = col.sets()[0].clone();
        let d1 = crate::exact::sub(&pts[1], &pts[0]);
        let d2 = crate::exact::sub(&pts[2], &pts[0]);
        let d3 = crate::exact::sub(&pts[3], &pts[0]);
        let m = RatMat::from_cols(&[d1, d2, d3]);
        assert_eq!(m.rank(), 1);

        let cop = gen_degenerate(3, 1, DegenerateKind::CoplanarAll, 5).unwrap();
        let all: Vec<Vec<Rat>> = cop.sets().iter().flatten().cloned().collect();
        let diffs: Vec<Vec<Rat>> = all[1..]
            .iter()
            .map(|p| crate::exact::sub(p, &all[0]))
            .collect();
        assert!(RatMat::from_cols(&diffs).rank() <= 2);
    }
}
