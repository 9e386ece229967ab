//! The ring of symmetric functions with monomial, power-sum, and Jack bases,
//! the one-parameter deformed inner product, and exact transition matrices
//! between all bases.
//!
//! Conventions:
//! - `Power` is the basis of *unnormalized* products `p_λ = ∏ p_{λ_i}`;
//!   transition matrices stay integral this way and no spurious denominators
//!   appear. `PowerNormalized` divides each `p_λ` by the centralizer order
//!   `z_λ`, which is the convention used for Heisenberg monomial states.
//! - `Jack(r)` is the basis of Jack polynomials `P_λ^{(r)}`, normalized so the
//!   coefficient of `m_λ` is 1. The parameter must be positive.
//! - The inner product with parameter `r` is diagonal on power sums:
//!   `⟨p_λ, p_μ⟩ = δ_{λμ} z_λ r^{ℓ(λ)}` on unnormalized products.
//!
//! Jack polynomials are computed degree by degree from the characterization
//! as `m_λ` plus dominance-lower monomial terms orthogonal to everything
//! strictly below: the orthogonality conditions form a square linear system
//! over the Gram matrix of the monomial basis, solved exactly. A singular
//! pivot is impossible for `r > 0` and is reported as an internal error.
//!
//! All per-degree data (power/monomial matrices, Jack rows) is memoized
//! behind a mutex; the caches are write-once per key and invisible to
//! callers.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, LazyLock, Mutex};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, QMatrix};
use crate::partition::{partitions_of, Bipartition, Partition};
use crate::rational::{format_rat, is_positive, pow_i, Rat};

/// Label of a basis of the degree-`n` slice of the ring.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Basis {
    /// Monomial symmetric functions `m_λ`.
    Monomial,
    /// Unnormalized power-sum products `∏ p_{λ_i}`.
    Power,
    /// Power-sum products divided by the centralizer order `z_λ`.
    PowerNormalized,
    /// Jack polynomials with a positive rational parameter.
    Jack(Rat),
}

impl Basis {
    /// Jack basis with validated parameter.
    pub fn jack(param: Rat) -> Result<Basis> {
        if !is_positive(&param) {
            return Err(Error::InvalidParameter(format!(
                "Jack parameter must be positive, got {}",
                format_rat(&param)
            )));
        }
        Ok(Basis::Jack(param))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Basis::Jack(r) if !is_positive(r) => Err(Error::InvalidParameter(format!(
                "Jack parameter must be positive, got {}",
                format_rat(r)
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Monomial => write!(f, "m"),
            Basis::Power => write!(f, "p"),
            Basis::PowerNormalized => write!(f, "pnorm"),
            Basis::Jack(r) => write!(f, "jack({})", format_rat(r)),
        }
    }
}

/// A homogeneous symmetric function: sparse coefficients on the partitions of
/// its degree, tagged with the basis the coefficients refer to. The zero
/// element is canonical: an empty coefficient map always has degree 0, so
/// structural equality never depends on how a zero was produced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymPoly {
    degree: usize,
    basis: Basis,
    coeffs: BTreeMap<Partition, Rat>,
}

impl SymPoly {
    pub fn new(degree: usize, basis: Basis, coeffs: BTreeMap<Partition, Rat>) -> Result<Self> {
        basis.validate()?;
        for key in coeffs.keys() {
            if key.size() != degree {
                return Err(Error::Mismatch(format!(
                    "coefficient key {key} has size {} in a degree-{degree} element",
                    key.size()
                )));
            }
        }
        let mut poly = SymPoly {
            degree,
            basis,
            coeffs,
        };
        poly.coeffs.retain(|_, c| !c.is_zero());
        if poly.coeffs.is_empty() {
            poly.degree = 0;
        }
        Ok(poly)
    }

    pub fn zero(basis: Basis) -> Self {
        SymPoly {
            degree: 0,
            basis,
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis element labelled by `key`, as an element of its own basis.
    pub fn basis_element(basis: Basis, key: Partition) -> Result<Self> {
        basis.validate()?;
        let degree = key.size();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(key, Rat::one());
        Ok(SymPoly {
            degree,
            basis,
            coeffs,
        })
    }

    /// The unit of the ring (degree 0) in the given basis.
    pub fn one(basis: Basis) -> Self {
        SymPoly::basis_element(basis, Partition::empty()).expect("unit")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, key: &Partition) -> Rat {
        self.coeffs.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &Rat)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Partition> {
        self.coeffs.keys()
    }

    pub fn add(&self, other: &SymPoly) -> Result<SymPoly> {
        if self.basis != other.basis {
            return Err(Error::Mismatch(format!(
                "cannot add {} element to {} element",
                self.basis, other.basis
            )));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::Mismatch(format!(
                "cannot add degree-{} element to degree-{} element",
                self.degree, other.degree
            )));
        }
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            accumulate(&mut coeffs, k.clone(), v.clone());
        }
        SymPoly::new(self.degree, self.basis.clone(), coeffs)
    }

    pub fn sub(&self, other: &SymPoly) -> Result<SymPoly> {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, factor: &Rat) -> SymPoly {
        if factor.is_zero() {
            return SymPoly::zero(self.basis.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, v)| (k.clone(), v * factor))
            .collect();
        SymPoly {
            degree: self.degree,
            basis: self.basis.clone(),
            coeffs,
        }
    }

    /// Exact change of basis. Converting back reproduces the input.
    pub fn convert(&self, target: &Basis) -> Result<SymPoly> {
        target.validate()?;
        if &self.basis == target {
            return Ok(self.clone());
        }
        let coeffs = convert_map(self.degree, &self.coeffs, &self.basis, target)?;
        Ok(SymPoly {
            degree: self.degree,
            basis: target.clone(),
            coeffs,
        })
    }
}

fn accumulate(map: &mut BTreeMap<Partition, Rat>, key: Partition, value: Rat) {
    use std::collections::btree_map::Entry;
    if value.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += value;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(value);
        }
    }
}

/// `z_λ` as a rational.
pub fn z_rat(la: &Partition) -> Rat {
    Rat::from_integer(la.centralizer_order())
}

/// Product rule for a power sum against a monomial symmetric function:
/// `p_k · m_λ = Σ_μ a_{λμ} m_μ` where `μ` runs over partitions obtained by
/// adding `k` to one distinct part value of `λ` (or appending a new part `k`)
/// and `a_{λμ}` is the multiplicity in `μ` of the enlarged part.
pub fn power_times_monomial(k: usize, la: &Partition) -> SymPoly {
    assert!(k >= 1, "power sum index must be positive");
    let mut coeffs = BTreeMap::new();
    let mut values: Vec<usize> = vec![0];
    values.extend(la.multiplicities().keys().copied());
    for v in values {
        let enlarged = v + k;
        let mu = if v == 0 {
            la.with_part(k)
        } else {
            la.without_part(v)
                .expect("distinct value")
                .with_part(enlarged)
        };
        let mult = Rat::from_integer((mu.multiplicity(enlarged) as u64).into());
        accumulate(&mut coeffs, mu, mult);
    }
    SymPoly {
        degree: la.size() + k,
        basis: Basis::Monomial,
        coeffs,
    }
}

/// Per-degree transition data between the power and monomial bases.
struct DegreeData {
    parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
    /// Row `λ`: expansion of the unnormalized `p_λ` in `m`.
    power_to_m: QMatrix,
    m_to_power: QMatrix,
}

static DEGREE_CACHE: LazyLock<Mutex<HashMap<usize, Arc<DegreeData>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn degree_data(n: usize) -> Arc<DegreeData> {
    if let Some(data) = DEGREE_CACHE.lock().unwrap().get(&n) {
        return Arc::clone(data);
    }
    let parts = partitions_of(n);
    let index: HashMap<Partition, usize> = parts
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let dim = parts.len();
    let mut rows = Vec::with_capacity(dim);
    for la in &parts {
        let mut expansion: BTreeMap<Partition, Rat> = BTreeMap::new();
        expansion.insert(Partition::empty(), Rat::one());
        for &part in la.parts() {
            let mut next: BTreeMap<Partition, Rat> = BTreeMap::new();
            for (key, coeff) in &expansion {
                for (mu, a) in power_times_monomial(part, key).iter() {
                    accumulate(&mut next, mu.clone(), coeff * a);
                }
            }
            expansion = next;
        }
        let mut row = vec![Rat::zero(); dim];
        for (mu, c) in expansion {
            row[index[&mu]] = c;
        }
        rows.push(row);
    }
    let power_to_m = QMatrix::from_rows(rows).expect("square by construction");
    let m_to_power = power_to_m
        .invert()
        .expect("power/monomial transition is invertible");
    let data = Arc::new(DegreeData {
        parts,
        index,
        power_to_m,
        m_to_power,
    });
    DEGREE_CACHE
        .lock()
        .unwrap()
        .entry(n)
        .or_insert(data)
        .clone()
}

/// Jack rows for one `(degree, parameter)` pair, in enumeration order.
struct JackData {
    /// Row `λ`: expansion of `P_λ^{(r)}` in `m`.
    jack_to_m: QMatrix,
    m_to_jack: QMatrix,
}

static JACK_CACHE: LazyLock<Mutex<HashMap<(usize, Rat), Arc<JackData>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn jack_data(n: usize, r: &Rat) -> Result<Arc<JackData>> {
    if !is_positive(r) {
        return Err(Error::InvalidParameter(format!(
            "Jack parameter must be positive, got {}",
            format_rat(r)
        )));
    }
    let key = (n, r.clone());
    if let Some(data) = JACK_CACHE.lock().unwrap().get(&key) {
        return Ok(Arc::clone(data));
    }
    let degree = degree_data(n);
    let dim = degree.parts.len();
    // Gram matrix of the monomial basis under the r-deformed product.
    let weights: Vec<Rat> = degree
        .parts
        .iter()
        .map(|ka| z_rat(ka) * pow_i(r, ka.length() as i64))
        .collect();
    let mut gram = vec![vec![Rat::zero(); dim]; dim];
    for i in 0..dim {
        for j in 0..=i {
            let mut g = Rat::zero();
            for k in 0..dim {
                let a = degree.m_to_power.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                let b = degree.m_to_power.entry(j, k);
                if b.is_zero() {
                    continue;
                }
                g += a * b * &weights[k];
            }
            gram[j][i] = g.clone();
            gram[i][j] = g;
        }
    }
    let mut rows = Vec::with_capacity(dim);
    for (i, la) in degree.parts.iter().enumerate() {
        let lower: Vec<usize> = (0..dim)
            .filter(|&j| j != i && degree.parts[j].is_dominated_by(la).expect("same size"))
            .collect();
        let mut row = vec![Rat::zero(); dim];
        row[i] = Rat::one();
        if !lower.is_empty() {
            let system: Vec<Vec<Rat>> = lower
                .iter()
                .map(|&a| lower.iter().map(|&b| gram[a][b].clone()).collect())
                .collect();
            let rhs: Vec<Rat> = lower.iter().map(|&a| -gram[i][a].clone()).collect();
            let solution = linalg::solve(system, rhs).map_err(|_| {
                Error::Internal(format!(
                    "singular Gram system for Jack element {la} at parameter {}",
                    format_rat(r)
                ))
            })?;
            for (&j, c) in lower.iter().zip(solution) {
                row[j] = c;
            }
        }
        rows.push(row);
    }
    let jack_to_m = QMatrix::from_rows(rows).expect("square by construction");
    let m_to_jack = jack_to_m
        .invert()
        .map_err(|_| Error::Internal("Jack/monomial transition not invertible".into()))?;
    let data = Arc::new(JackData {
        jack_to_m,
        m_to_jack,
    });
    Ok(JACK_CACHE
        .lock()
        .unwrap()
        .entry(key)
        .or_insert(data)
        .clone())
}

fn apply_matrix(
    n: usize,
    coeffs: &BTreeMap<Partition, Rat>,
    matrix: &QMatrix,
) -> BTreeMap<Partition, Rat> {
    let degree = degree_data(n);
    let mut out = BTreeMap::new();
    for (la, c) in coeffs {
        let row = degree.index[la];
        for (j, mu) in degree.parts.iter().enumerate() {
            let entry = matrix.entry(row, j);
            if !entry.is_zero() {
                accumulate(&mut out, mu.clone(), c * entry);
            }
        }
    }
    out
}

fn convert_map(
    n: usize,
    coeffs: &BTreeMap<Partition, Rat>,
    from: &Basis,
    to: &Basis,
) -> Result<BTreeMap<Partition, Rat>> {
    if from == to {
        return Ok(coeffs.clone());
    }
    // Normalized power sums differ from unnormalized by the diagonal z_λ.
    match (from, to) {
        (Basis::PowerNormalized, _) => {
            let unnorm = coeffs
                .iter()
                .map(|(k, v)| (k.clone(), v / z_rat(k)))
                .collect();
            return convert_map(n, &unnorm, &Basis::Power, to);
        }
        (_, Basis::PowerNormalized) => {
            let unnorm = convert_map(n, coeffs, from, &Basis::Power)?;
            return Ok(unnorm
                .into_iter()
                .map(|(k, v)| {
                    let z = z_rat(&k);
                    (k, v * z)
                })
                .collect());
        }
        _ => {}
    }
    let via_m: BTreeMap<Partition, Rat> = match from {
        Basis::Monomial => coeffs.clone(),
        Basis::Power => apply_matrix(n, coeffs, &degree_data(n).power_to_m),
        Basis::Jack(r) => apply_matrix(n, coeffs, &jack_data(n, r)?.jack_to_m),
        Basis::PowerNormalized => unreachable!("handled above"),
    };
    Ok(match to {
        Basis::Monomial => via_m,
        Basis::Power => apply_matrix(n, &via_m, &degree_data(n).m_to_power),
        Basis::Jack(r) => apply_matrix(n, &via_m, &jack_data(n, r)?.m_to_jack),
        Basis::PowerNormalized => unreachable!("handled above"),
    })
}

/// The `r`-deformed bilinear form, diagonal on power sums:
/// `⟨p_λ, p_μ⟩ = δ_{λμ} z_λ r^{ℓ(λ)}` on unnormalized products.
pub fn inner_product(f: &SymPoly, g: &SymPoly, r: &Rat) -> Result<Rat> {
    if !is_positive(r) {
        return Err(Error::InvalidParameter(format!(
            "inner product parameter must be positive, got {}",
            format_rat(r)
        )));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(Rat::zero());
    }
    if f.degree != g.degree {
        return Err(Error::Mismatch(format!(
            "inner product of degree {} against degree {}",
            f.degree, g.degree
        )));
    }
    let fp = f.convert(&Basis::Power)?;
    let gp = g.convert(&Basis::Power)?;
    let mut total = Rat::zero();
    for (la, a) in fp.iter() {
        let b = gp.coeff(la);
        if b.is_zero() {
            continue;
        }
        total += a * b * z_rat(la) * pow_i(r, la.length() as i64);
    }
    Ok(total)
}

/// The Jack polynomial `P_λ^{(r)}` expanded in the monomial basis: leading
/// coefficient 1 on `m_λ`, support inside the dominance down-set of `λ`.
pub fn jack_polynomial(la: &Partition, r: &Rat) -> Result<SymPoly> {
    let n = la.size();
    let data = jack_data(n, r)?;
    let degree = degree_data(n);
    let row = degree.index[la];
    let mut coeffs = BTreeMap::new();
    for (j, mu) in degree.parts.iter().enumerate() {
        let entry = data.jack_to_m.entry(row, j);
        if !entry.is_zero() {
            coeffs.insert(mu.clone(), entry.clone());
        }
    }
    Ok(SymPoly {
        degree: n,
        basis: Basis::Monomial,
        coeffs,
    })
}

/// Closed form for `⟨P_λ, P_λ⟩` at parameter `r`: the ratio of the upper to
/// the lower hook product evaluated at `(1, r)`.
pub fn jack_norm_squared(la: &Partition, r: &Rat) -> Result<Rat> {
    if !is_positive(r) {
        return Err(Error::InvalidParameter(format!(
            "Jack parameter must be positive, got {}",
            format_rat(r)
        )));
    }
    let one = Rat::one();
    Ok(la.upper_hook_product(&one, r) / la.lower_hook_product(&one, r))
}

/// The degree-`n` transition matrix from Jack polynomials to *normalized*
/// power sums: row `λ`, column `μ` holds the coefficient of `p_μ/z_μ` in
/// `P_λ^{(r)}`. Rows and columns follow [`partitions_of`]. Invertible.
pub fn jack_power_transition(n: usize, r: &Rat) -> Result<QMatrix> {
    let data = jack_data(n, r)?;
    let degree = degree_data(n);
    let dim = degree.parts.len();
    let mut rows = Vec::with_capacity(dim);
    for i in 0..dim {
        let jack_row: Vec<Rat> = (0..dim)
            .map(|j| data.jack_to_m.entry(i, j).clone())
            .collect();
        let in_power = degree.m_to_power.apply_row(&jack_row);
        let row: Vec<Rat> = in_power
            .into_iter()
            .enumerate()
            .map(|(j, c)| c * z_rat(&degree.parts[j]))
            .collect();
        rows.push(row);
    }
    QMatrix::from_rows(rows)
}

/// An element of the tensor square of the ring, homogeneous of a fixed total
/// degree, with each tensor slot tracked in its own basis. Terms are keyed by
/// the pair of partitions labelling the two slots.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorPoly {
    degree: usize,
    bases: (Basis, Basis),
    coeffs: BTreeMap<Bipartition, Rat>,
}

impl TensorPoly {
    pub fn new(
        degree: usize,
        bases: (Basis, Basis),
        coeffs: BTreeMap<Bipartition, Rat>,
    ) -> Result<Self> {
        bases.0.validate()?;
        bases.1.validate()?;
        for key in coeffs.keys() {
            if key.total() != degree {
                return Err(Error::Mismatch(format!(
                    "tensor key {key} has total {} in a degree-{degree} element",
                    key.total()
                )));
            }
        }
        let mut poly = TensorPoly {
            degree,
            bases,
            coeffs,
        };
        poly.coeffs.retain(|_, c| !c.is_zero());
        if poly.coeffs.is_empty() {
            poly.degree = 0;
        }
        Ok(poly)
    }

    pub fn zero(bases: (Basis, Basis)) -> Self {
        TensorPoly {
            degree: 0,
            bases,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis_element(bases: (Basis, Basis), key: Bipartition) -> Result<Self> {
        let degree = key.total();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(key, Rat::one());
        TensorPoly::new(degree, bases, coeffs)
    }

    pub fn one(bases: (Basis, Basis)) -> Self {
        TensorPoly::basis_element(
            bases,
            Bipartition::new(Partition::empty(), Partition::empty()),
        )
        .expect("unit")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn bases(&self) -> &(Basis, Basis) {
        &self.bases
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, key: &Bipartition) -> Rat {
        self.coeffs.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Bipartition, &Rat)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &TensorPoly) -> Result<TensorPoly> {
        if self.bases != other.bases {
            return Err(Error::Mismatch(
                "tensor elements use different bases".into(),
            ));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::Mismatch("tensor element degrees differ".into()));
        }
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            accumulate_bi(&mut coeffs, k.clone(), v.clone());
        }
        TensorPoly::new(self.degree, self.bases.clone(), coeffs)
    }

    pub fn scale(&self, factor: &Rat) -> TensorPoly {
        if factor.is_zero() {
            return TensorPoly::zero(self.bases.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, v)| (k.clone(), v * factor))
            .collect();
        TensorPoly {
            degree: self.degree,
            bases: self.bases.clone(),
            coeffs,
        }
    }

    /// Slotwise exact change of basis.
    pub fn convert(&self, target: (Basis, Basis)) -> Result<TensorPoly> {
        target.0.validate()?;
        target.1.validate()?;
        if self.bases == target {
            return Ok(self.clone());
        }
        let mut coeffs = BTreeMap::new();
        for (key, c) in &self.coeffs {
            let first = expand_single(&key.first, &self.bases.0, &target.0)?;
            let second = expand_single(&key.second, &self.bases.1, &target.1)?;
            for (mu1, a) in &first {
                for (mu2, b) in &second {
                    accumulate_bi(
                        &mut coeffs,
                        Bipartition::new(mu1.clone(), mu2.clone()),
                        c * a * b,
                    );
                }
            }
        }
        TensorPoly::new(self.degree, target, coeffs)
    }
}

pub(crate) fn accumulate_bi(map: &mut BTreeMap<Bipartition, Rat>, key: Bipartition, value: Rat) {
    use std::collections::btree_map::Entry;
    if value.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += value;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(value);
        }
    }
}

fn expand_single(la: &Partition, from: &Basis, to: &Basis) -> Result<Vec<(Partition, Rat)>> {
    if from == to {
        return Ok(vec![(la.clone(), Rat::one())]);
    }
    let mut single = BTreeMap::new();
    single.insert(la.clone(), Rat::one());
    let converted = convert_map(la.size(), &single, from, to)?;
    Ok(converted.into_iter().collect())
}

/// Bilinear form on the tensor square with independent parameters for the
/// two slots.
pub fn tensor_inner_product(f: &TensorPoly, g: &TensorPoly, r1: &Rat, r2: &Rat) -> Result<Rat> {
    if f.is_zero() || g.is_zero() {
        return Ok(Rat::zero());
    }
    if f.degree != g.degree {
        return Err(Error::Mismatch(format!(
            "inner product of degree {} against degree {}",
            f.degree, g.degree
        )));
    }
    let power = (Basis::Power, Basis::Power);
    let fp = f.convert(power.clone())?;
    let gp = g.convert(power)?;
    let mut total = Rat::zero();
    for (key, a) in fp.iter() {
        let b = gp.coeff(key);
        if b.is_zero() {
            continue;
        }
        total += a
            * b
            * z_rat(&key.first)
            * z_rat(&key.second)
            * pow_i(r1, key.first.length() as i64)
            * pow_i(r2, key.second.length() as i64);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn m_elt(parts: &[usize]) -> SymPoly {
        SymPoly::basis_element(Basis::Monomial, pt(parts)).unwrap()
    }

    #[test]
    fn power_times_monomial_examples() {
        let f = power_times_monomial(1, &pt(&[1]));
        assert_eq!(f.coeff(&pt(&[2])), rat(1));
        assert_eq!(f.coeff(&pt(&[1, 1])), rat(2));
        assert_eq!(f.iter().count(), 2);

        let g = power_times_monomial(2, &pt(&[1]));
        assert_eq!(g.coeff(&pt(&[3])), rat(1));
        assert_eq!(g.coeff(&pt(&[2, 1])), rat(1));

        let h = power_times_monomial(4, &Partition::empty());
        assert_eq!(h.coeff(&pt(&[4])), rat(1));
        assert_eq!(h.iter().count(), 1);
    }

    #[test]
    fn monomial_to_power_degree_two() {
        let f = m_elt(&[1, 1]).convert(&Basis::Power).unwrap();
        assert_eq!(f.coeff(&pt(&[1, 1])), ratio(1, 2));
        assert_eq!(f.coeff(&pt(&[2])), ratio(-1, 2));
    }

    #[test]
    fn degree_one_bases_coincide() {
        let p = SymPoly::basis_element(Basis::Power, pt(&[1])).unwrap();
        let m = p.convert(&Basis::Monomial).unwrap();
        assert_eq!(m.coeff(&pt(&[1])), rat(1));
        assert_eq!(m.iter().count(), 1);
    }

    #[test]
    fn round_trips_are_exact() {
        let params = [ratio(1, 1), ratio(1, 2), ratio(2, 1), ratio(1, 3)];
        for n in 0..=7 {
            let mut bases = vec![Basis::Monomial, Basis::Power, Basis::PowerNormalized];
            for r in &params {
                bases.push(Basis::Jack(r.clone()));
            }
            // a generic-looking element with small mixed coefficients
            let mut coeffs = BTreeMap::new();
            for (i, la) in partitions_of(n).into_iter().enumerate() {
                coeffs.insert(la, ratio(i as i64 + 1, 3) - ratio(1, 7));
            }
            let f = SymPoly::new(n, Basis::Monomial, coeffs).unwrap();
            for from in &bases {
                let g = f.convert(from).unwrap();
                for to in &bases {
                    let there = g.convert(to).unwrap();
                    let back = there.convert(from).unwrap();
                    assert_eq!(back, g, "degree {n}: {from} -> {to} -> {from}");
                }
            }
        }
    }

    #[test]
    fn inner_product_examples() {
        let r = ratio(3, 5);
        let p2 = SymPoly::basis_element(Basis::Power, pt(&[2])).unwrap();
        let p11 = SymPoly::basis_element(Basis::Power, pt(&[1, 1])).unwrap();
        assert_eq!(inner_product(&p2, &p2, &r).unwrap(), rat(2) * &r);
        assert_eq!(inner_product(&p2, &p11, &r).unwrap(), rat(0));
        let m1 = m_elt(&[1]);
        assert_eq!(inner_product(&m1, &m1, &r).unwrap(), r);
    }

    #[test]
    fn inner_product_rejects_mismatch() {
        let f = m_elt(&[1]);
        let g = m_elt(&[2]);
        assert!(inner_product(&f, &g, &rat(1)).is_err());
        assert!(inner_product(&f, &f, &rat(-1)).is_err());
    }

    #[test]
    fn inner_product_is_symmetric_and_bilinear() {
        let r = ratio(2, 3);
        let f = m_elt(&[2, 1]).scale(&ratio(3, 4));
        let g = m_elt(&[1, 1, 1]).add(&m_elt(&[3]).scale(&rat(-2))).unwrap();
        let h = m_elt(&[2, 1]);
        assert_eq!(
            inner_product(&f, &g, &r).unwrap(),
            inner_product(&g, &f, &r).unwrap()
        );
        let lhs = inner_product(&f.add(&h).unwrap(), &g, &r).unwrap();
        let rhs = inner_product(&f, &g, &r).unwrap() + inner_product(&h, &g, &r).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn jack_bottom_is_monomial() {
        for n in 1..=6 {
            let ones = pt(&vec![1; n]);
            let jack = jack_polynomial(&ones, &ratio(2, 7)).unwrap();
            assert_eq!(jack.coeff(&ones), rat(1));
            assert_eq!(jack.iter().count(), 1);
        }
    }

    #[test]
    fn jack_row_two_matches_hand_solution() {
        for r in [ratio(1, 2), ratio(2, 1), ratio(5, 3)] {
            let jack = jack_polynomial(&pt(&[2]), &r).unwrap();
            assert_eq!(jack.coeff(&pt(&[2])), rat(1));
            let expected = rat(2) / (rat(1) + &r);
            assert_eq!(jack.coeff(&pt(&[1, 1])), expected, "r = {r}");
        }
        // at r = 1 this is the Schur polynomial
        let schur = jack_polynomial(&pt(&[2]), &rat(1)).unwrap();
        assert_eq!(schur.coeff(&pt(&[1, 1])), rat(1));
    }

    #[test]
    fn jack_triangular_in_dominance() {
        for n in 0..=8 {
            for la in partitions_of(n) {
                for r in [ratio(1, 2), ratio(3, 1)] {
                    let jack = jack_polynomial(&la, &r).unwrap();
                    assert_eq!(jack.coeff(&la), rat(1));
                    for mu in jack.support() {
                        assert!(mu.is_dominated_by(&la).unwrap(), "{mu} in support of {la}");
                    }
                }
            }
        }
    }

    #[test]
    fn jack_norm_examples() {
        let r = ratio(4, 7);
        assert_eq!(jack_norm_squared(&pt(&[1]), &r).unwrap(), r);
        assert_eq!(
            jack_norm_squared(&pt(&[2]), &r).unwrap(),
            rat(2) * &r * &r / (rat(1) + &r)
        );
        assert_eq!(
            jack_norm_squared(&pt(&[1, 1]), &r).unwrap(),
            &r * (rat(1) + &r) / rat(2)
        );
        // closed form agrees with the direct inner product
        let jack = jack_polynomial(&pt(&[2]), &r).unwrap();
        assert_eq!(
            inner_product(&jack, &jack, &r).unwrap(),
            jack_norm_squared(&pt(&[2]), &r).unwrap()
        );
    }

    #[test]
    fn transition_matrix_degree_one_and_two() {
        let t1 = jack_power_transition(1, &ratio(5, 2)).unwrap();
        assert_eq!(t1.size(), 1);
        assert_eq!(*t1.entry(0, 0), rat(1));

        // rows: (2), (1,1); at r = 1 these are the Schur polynomials
        let t2 = jack_power_transition(2, &rat(1)).unwrap();
        assert_eq!(*t2.entry(0, 0), rat(1));
        assert_eq!(*t2.entry(0, 1), rat(1));
        assert_eq!(*t2.entry(1, 0), rat(-1));
        assert_eq!(*t2.entry(1, 1), rat(1));
    }

    #[test]
    fn transition_matrix_invertible() {
        for n in 0..=5 {
            for r in [rat(1), ratio(1, 2), rat(2), ratio(1, 3)] {
                let t = jack_power_transition(n, &r).unwrap();
                assert!(t.invert().is_ok(), "n={n} r={r}");
            }
        }
    }

    #[test]
    fn tensor_convert_and_pair() {
        let key = Bipartition::new(pt(&[1]), pt(&[1]));
        let t = TensorPoly::basis_element((Basis::Monomial, Basis::Monomial), key.clone()).unwrap();
        let p = t.convert((Basis::Power, Basis::Power)).unwrap();
        assert_eq!(p.coeff(&key), rat(1));
        let (r1, r2) = (rat(1), ratio(1, 2));
        // ⟨p₁⊗p₁, p₁⊗p₁⟩ = (z·r1)(z·r2) = r1 r2
        assert_eq!(tensor_inner_product(&p, &p, &r1, &r2).unwrap(), ratio(1, 2));
    }

    #[test]
    fn tensor_mixed_degrees_convert_blockwise() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Bipartition::new(pt(&[2]), pt(&[1])), rat(1));
        coeffs.insert(Bipartition::new(pt(&[1]), pt(&[1, 1])), rat(-3));
        let t = TensorPoly::new(3, (Basis::Power, Basis::Power), coeffs).unwrap();
        let m = t.convert((Basis::Monomial, Basis::Monomial)).unwrap();
        let back = m.convert((Basis::Power, Basis::Power)).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn zero_degree_behaves() {
        let unit = SymPoly::one(Basis::Monomial);
        let conv = unit.convert(&Basis::Jack(rat(1))).unwrap();
        assert_eq!(conv.coeff(&Partition::empty()), rat(1));
        assert_eq!(inner_product(&unit, &unit, &rat(1)).unwrap(), rat(1));
    }
}
