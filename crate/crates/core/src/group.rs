//! Finite groups of unimodular matrices: closure and projective quotient.

use crate::complex::BigComplex;
use crate::error::{Error, Result};
use crate::matrix::LinearSubstitution;
use crate::perm::Perm;
use crate::tolerance::ToleranceConfig;

/// Relative tolerance of the double-precision prefilter used in lookups.
const PREFILTER: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct MatrixGroup {
    elements: Vec<LinearSubstitution>,
    generators: Vec<LinearSubstitution>,
    approx: Vec<Vec<(f64, f64)>>,
    /// Partition into scalar-multiple classes, in order of first appearance.
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    class_keys: Vec<Vec<(f64, f64)>>,
    labels: Option<Vec<Perm>>,
    tol: f64,
}

fn approx_eq(a: &[(f64, f64)], b: &[(f64, f64)], scale: f64) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x.0 - y.0).abs() <= PREFILTER * scale && (x.1 - y.1).abs() <= PREFILTER * scale)
}

/// Breadth-first closure of `generators` under left multiplication.
pub fn close_group(
    generators: &[LinearSubstitution],
    order_bound: usize,
    cfg: &ToleranceConfig,
) -> Result<MatrixGroup> {
    let first = generators
        .first()
        .ok_or_else(|| Error::InvalidConfig("no generators".into()))?;
    if order_bound == 0 {
        return Err(Error::InvalidConfig("order bound must be at least 1".into()));
    }
    let dim = first.dim();
    let prec = cfg.prec();
    let gens: Vec<LinearSubstitution> = generators.iter().map(|g| g.with_prec(prec)).collect();
    for g in &gens {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
        let drift = g.determinant().dist_f64(&BigComplex::one(prec));
        if drift > cfg.eq_tolerance {
            return Err(Error::verification("generator determinant", drift));
        }
    }
    let mut elements = vec![LinearSubstitution::identity(dim, prec)];
    let mut approx = vec![elements[0].to_c64()];
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &i in &frontier {
            for g in &gens {
                let h = g.mul(&elements[i])?;
                let ha = h.to_c64();
                if find_in(&elements, &approx, &h, &ha, cfg.eq_tolerance)?.is_none() {
                    if elements.len() >= order_bound {
                        return Err(Error::OrderBoundExceeded { bound: order_bound });
                    }
                    elements.push(h);
                    approx.push(ha);
                    next.push(elements.len() - 1);
                }
            }
        }
        frontier = next;
    }
    MatrixGroup::from_elements(elements, gens, approx, cfg.eq_tolerance)
}

/// Rebuilds a group from a stored element list, checking that the elements
/// are distinct, unimodular, contain the identity and the generators, and are
/// closed under left multiplication by the generators. Element order is kept.
pub fn group_from_elements(
    elements: Vec<LinearSubstitution>,
    generators: &[LinearSubstitution],
    cfg: &ToleranceConfig,
) -> Result<MatrixGroup> {
    let prec = cfg.prec();
    let tol = cfg.eq_tolerance;
    let first = elements
        .first()
        .ok_or_else(|| Error::InvalidConfig("empty element list".into()))?;
    let dim = first.dim();
    let elements: Vec<LinearSubstitution> = elements.iter().map(|e| e.with_prec(prec)).collect();
    let one = BigComplex::one(prec);
    let mut approx: Vec<Vec<(f64, f64)>> = Vec::with_capacity(elements.len());
    for (k, e) in elements.iter().enumerate() {
        if e.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: e.dim(),
            });
        }
        let drift = e.determinant().dist_f64(&one);
        if drift > tol {
            return Err(Error::verification("element determinant", drift));
        }
        let a = e.to_c64();
        if find_in(&elements[..k], &approx, e, &a, tol)?.is_some() {
            return Err(Error::verification("elements distinct", 0.0));
        }
        approx.push(a);
    }
    let gens: Vec<LinearSubstitution> = generators.iter().map(|g| g.with_prec(prec)).collect();
    let identity = LinearSubstitution::identity(dim, prec);
    for m in gens.iter().chain(std::iter::once(&identity)) {
        if find_in(&elements, &approx, m, &m.to_c64(), tol)?.is_none() {
            return Err(Error::verification("generators and identity present", f64::INFINITY));
        }
    }
    for g in &gens {
        for e in &elements {
            let h = g.mul(e)?;
            if find_in(&elements, &approx, &h, &h.to_c64(), tol)?.is_none() {
                return Err(Error::verification("closed under generators", f64::INFINITY));
            }
        }
    }
    MatrixGroup::from_elements(elements, gens, approx, tol)
}

fn find_in(
    elements: &[LinearSubstitution],
    approx: &[Vec<(f64, f64)>],
    m: &LinearSubstitution,
    ma: &[(f64, f64)],
    tol: f64,
) -> Result<Option<usize>> {
    let scale = m.max_entry_abs().max(1.0);
    for (k, a) in approx.iter().enumerate() {
        if approx_eq(a, ma, scale) {
            let d = elements[k].max_entry_diff(m);
            if d <= tol * scale {
                return Ok(Some(k));
            }
            return Err(Error::DuplicateCollision);
        }
    }
    Ok(None)
}

impl MatrixGroup {
    fn from_elements(
        elements: Vec<LinearSubstitution>,
        generators: Vec<LinearSubstitution>,
        approx: Vec<Vec<(f64, f64)>>,
        tol: f64,
    ) -> Result<Self> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_keys: Vec<Vec<(f64, f64)>> = Vec::new();
        let mut class_norms: Vec<LinearSubstitution> = Vec::new();
        let mut class_of = vec![0; elements.len()];
        for (i, m) in elements.iter().enumerate() {
            let norm = m.phase_normalized();
            let key = norm.to_c64();
            let mut found = None;
            for (c, k) in class_keys.iter().enumerate() {
                if approx_eq(k, &key, 1.0) {
                    if class_norms[c].max_entry_diff(&norm) > tol {
                        return Err(Error::NonRootOfUnityRatio);
                    }
                    found = Some(c);
                    break;
                }
            }
            let c = match found {
                Some(c) => c,
                None => {
                    classes.push(Vec::new());
                    class_keys.push(key);
                    class_norms.push(norm);
                    classes.len() - 1
                }
            };
            classes[c].push(i);
            class_of[i] = c;
        }
        let g = Self {
            elements,
            generators,
            approx,
            classes,
            class_of,
            class_keys,
            labels: None,
            tol,
        };
        g.check_kernel()?;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn prec(&self) -> u32 {
        self.elements[0].prec()
    }

    pub fn elements(&self) -> &[LinearSubstitution] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &LinearSubstitution {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[LinearSubstitution] {
        &self.generators
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    /// First element of each class in closure order.
    pub fn representative(&self, class: usize) -> &LinearSubstitution {
        &self.elements[self.classes[class][0]]
    }

    pub fn representatives(&self) -> Vec<&LinearSubstitution> {
        (0..self.classes.len()).map(|c| self.representative(c)).collect()
    }

    pub fn labels(&self) -> Option<&[Perm]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Vec<Perm>) -> Result<()> {
        if labels.len() != self.classes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.classes.len(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(())
    }

    /// Index of the element equal to `m`, if any.
    pub fn find_element(&self, m: &LinearSubstitution) -> Result<Option<usize>> {
        find_in(&self.elements, &self.approx, m, &m.to_c64(), self.tol)
    }

    /// Index of the projective class containing a scalar multiple of `m`.
    pub fn find_class(&self, m: &LinearSubstitution) -> Option<usize> {
        let key = m.phase_normalized().to_c64();
        self.class_keys.iter().position(|k| approx_eq(k, &key, 1.0))
    }

    /// Index of `elements[i] * elements[j]`.
    pub fn product_index(&self, i: usize, j: usize) -> Result<usize> {
        let p = self.elements[i].mul(&self.elements[j])?;
        self.find_element(&p)?
            .ok_or_else(|| Error::verification("group closed under products", f64::INFINITY))
    }

    /// Scalar elements, each checked to be a root of unity of order dividing
    /// the kernel size.
    fn check_kernel(&self) -> Result<Vec<usize>> {
        let kernel: Vec<usize> = (0..self.elements.len())
            .filter(|&i| self.elements[i].as_scalar(self.tol).is_some())
            .collect();
        let k = kernel.len() as u32;
        let prec = self.prec();
        for &i in &kernel {
            let c = self.elements[i].get(0, 0);
            if c.pow_u(k).dist_f64(&BigComplex::one(prec)) > self.tol {
                return Err(Error::NonRootOfUnityRatio);
            }
        }
        for class in &self.classes {
            if class.len() != kernel.len() {
                return Err(Error::NonRootOfUnityRatio);
            }
        }
        Ok(kernel)
    }

    /// Whether every determinant is 1 to tolerance.
    pub fn max_determinant_drift(&self) -> f64 {
        let one = BigComplex::one(self.prec());
        self.elements
            .iter()
            .map(|e| e.determinant().dist_f64(&one))
            .fold(0.0, f64::max)
    }
}

/// `(number of projective classes, scalar kernel)`.
pub fn projectivize(group: &MatrixGroup) -> Result<(usize, Vec<LinearSubstitution>)> {
    let kernel = group.check_kernel()?;
    Ok((
        group.class_count(),
        kernel.into_iter().map(|i| group.elements[i].clone()).collect(),
    ))
}
