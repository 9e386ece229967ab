//! Middle-degree equivariant cohomology of the Hilbert schemes of points:
//! fixed-point classes, the bilinear pairing, the star product, the
//! symmetric-function isomorphisms, and the basis-transition pipeline that
//! computes the ordinary cup product on the line-bundle model.
//!
//! Coordinates are plain rationals throughout: the equivariant variable is
//! eliminated by the normalization baked into the distinguished fixed-point
//! classes, so no rational-function arithmetic ever appears.
//!
//! Degree conventions for the zero-section family of Heisenberg monomials:
//! an index-`k` unit-class operator has ordinary degree `2k-2` and an
//! index-`k` zero-section operator has degree `2k`. The filtration by this
//! degree is closed under the star product (a tested invariant), and the
//! ordinary cup product is the associated-graded projection of the star
//! product.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{FockState, HeisBasis, HeisMonomial};
use crate::partition::{bipartitions_of, partitions_of, Bipartition, Partition};
use crate::rational::{rat, Rat};
use crate::symfunc::{accumulate_bi, Basis, SymPoly, TensorPoly};

/// The surface carrying the torus action: the affine plane with weights
/// `(α, β)` on the two invariant axes, or the total space of the degree `-γ`
/// line bundle over the projective line.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SurfaceModel {
    Plane { alpha: i64, beta: i64 },
    LineBundle { gamma: i64 },
}

impl SurfaceModel {
    /// Plane model; the two weights must be nonzero and of the same sign.
    pub fn plane(alpha: i64, beta: i64) -> Result<SurfaceModel> {
        let model = SurfaceModel::Plane { alpha, beta };
        model.validate()?;
        Ok(model)
    }

    /// Line-bundle model over the projective line; `γ ≥ 2`.
    pub fn line_bundle(gamma: i64) -> Result<SurfaceModel> {
        let model = SurfaceModel::LineBundle { gamma };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SurfaceModel::Plane { alpha, beta } => {
                if alpha == 0 || beta == 0 || (alpha > 0) != (beta > 0) {
                    Err(Error::InvalidParameter(format!(
                        "plane weights must be nonzero and of the same sign, got ({alpha}, {beta})"
                    )))
                } else {
                    Ok(())
                }
            }
            SurfaceModel::LineBundle { gamma } => {
                if gamma < 2 {
                    Err(Error::InvalidParameter(format!(
                        "line bundle degree parameter must be at least 2, got {gamma}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Jack parameter `β/α` of the plane model.
    pub fn plane_jack_param(&self) -> Result<Rat> {
        match *self {
            SurfaceModel::Plane { alpha, beta } => Ok(rat(beta) / rat(alpha)),
            _ => Err(Error::Mismatch("expected the plane model".into())),
        }
    }

    /// Chart weights `(α, β)` of the plane model as rationals.
    pub fn plane_weights(&self) -> Result<(Rat, Rat)> {
        match *self {
            SurfaceModel::Plane { alpha, beta } => Ok((rat(alpha), rat(beta))),
            _ => Err(Error::Mismatch("expected the plane model".into())),
        }
    }

    /// Jack parameters `(1, 1/(γ-1))` of the two charts of the line bundle.
    pub fn bundle_jack_params(&self) -> Result<(Rat, Rat)> {
        match *self {
            SurfaceModel::LineBundle { gamma } => Ok((Rat::one(), Rat::one() / rat(gamma - 1))),
            _ => Err(Error::Mismatch("expected the line-bundle model".into())),
        }
    }

    /// Chart weights of the line bundle: `(-1, -1)` at the first fixed point
    /// and `(γ-1, 1)` at the second.
    pub fn bundle_weights(&self) -> Result<((Rat, Rat), (Rat, Rat))> {
        match *self {
            SurfaceModel::LineBundle { gamma } => {
                Ok(((rat(-1), rat(-1)), (rat(gamma - 1), rat(1))))
            }
            _ => Err(Error::Mismatch("expected the line-bundle model".into())),
        }
    }

    pub fn gamma(&self) -> Result<i64> {
        match *self {
            SurfaceModel::LineBundle { gamma } => Ok(gamma),
            _ => Err(Error::Mismatch("expected the line-bundle model".into())),
        }
    }

    /// Jack bases of the two tensor slots of the line-bundle model.
    fn bundle_jack_bases(&self) -> Result<(Basis, Basis)> {
        let (r1, r2) = self.bundle_jack_params()?;
        Ok((Basis::Jack(r1), Basis::Jack(r2)))
    }
}

/// A fixed-point label: a partition for the plane, a pair for the bundle.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ClassKey {
    Single(Partition),
    Pair(Bipartition),
}

impl ClassKey {
    pub fn size(&self) -> usize {
        match self {
            ClassKey::Single(la) => la.size(),
            ClassKey::Pair(bi) => bi.total(),
        }
    }
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKey::Single(la) => write!(f, "{la}"),
            ClassKey::Pair(bi) => write!(f, "{bi}"),
        }
    }
}

/// All fixed-point labels of point count `n` in canonical order.
pub fn class_keys(model: &SurfaceModel, n: usize) -> Vec<ClassKey> {
    match model {
        SurfaceModel::Plane { .. } => partitions_of(n).into_iter().map(ClassKey::Single).collect(),
        SurfaceModel::LineBundle { .. } => {
            bipartitions_of(n).into_iter().map(ClassKey::Pair).collect()
        }
    }
}

/// Star-product constant of a fixed-point class: the upper hook product of
/// the label at the chart weights. The `(-1, -1)` chart contributes a signed
/// hook-length product which is kept as is, signs included.
fn star_constant(model: &SurfaceModel, key: &ClassKey) -> Result<Rat> {
    match (model, key) {
        (SurfaceModel::Plane { .. }, ClassKey::Single(la)) => {
            let (a, b) = model.plane_weights()?;
            Ok(la.upper_hook_product(&a, &b))
        }
        (SurfaceModel::LineBundle { .. }, ClassKey::Pair(bi)) => {
            let (w1, w2) = model.bundle_weights()?;
            Ok(bi.first.upper_hook_product(&w1.0, &w1.1)
                * bi.second.upper_hook_product(&w2.0, &w2.1))
        }
        _ => Err(Error::Mismatch("class key does not match the model".into())),
    }
}

/// Diagonal value of the bilinear pairing on a fixed-point class: the ratio
/// of the upper to the lower hook product at the chart weights. For the line
/// bundle the first chart has weights `(-1, -1)` whose ratio is 1, so only
/// the second slot contributes.
fn pairing_constant(model: &SurfaceModel, key: &ClassKey) -> Result<Rat> {
    match (model, key) {
        (SurfaceModel::Plane { .. }, ClassKey::Single(la)) => {
            let (a, b) = model.plane_weights()?;
            Ok(la.upper_hook_product(&a, &b) / la.lower_hook_product(&a, &b))
        }
        (SurfaceModel::LineBundle { .. }, ClassKey::Pair(bi)) => {
            let (_, w2) = model.bundle_weights()?;
            Ok(bi.second.upper_hook_product(&w2.0, &w2.1)
                / bi.second.lower_hook_product(&w2.0, &w2.1))
        }
        _ => Err(Error::Mismatch("class key does not match the model".into())),
    }
}

/// An element of the middle-degree equivariant cohomology of the Hilbert
/// scheme of `n` points, in the distinguished fixed-point basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivClass {
    n: usize,
    model: SurfaceModel,
    coeffs: BTreeMap<ClassKey, Rat>,
}

impl EquivClass {
    pub fn new(n: usize, model: SurfaceModel, coeffs: BTreeMap<ClassKey, Rat>) -> Result<Self> {
        model.validate()?;
        for key in coeffs.keys() {
            let shape_ok = matches!(
                (&model, key),
                (SurfaceModel::Plane { .. }, ClassKey::Single(_))
                    | (SurfaceModel::LineBundle { .. }, ClassKey::Pair(_))
            );
            if !shape_ok {
                return Err(Error::Mismatch(format!(
                    "key {key} does not match the model"
                )));
            }
            if key.size() != n {
                return Err(Error::Mismatch(format!(
                    "key {key} has size {} in a point-count-{n} class",
                    key.size()
                )));
            }
        }
        let mut class = EquivClass { n, model, coeffs };
        class.coeffs.retain(|_, c| !c.is_zero());
        if class.coeffs.is_empty() {
            class.n = 0;
        }
        Ok(class)
    }

    pub fn zero(model: SurfaceModel) -> Self {
        EquivClass {
            n: 0,
            model,
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis class labelled by one fixed point.
    pub fn fixed_point(model: SurfaceModel, key: ClassKey) -> Result<Self> {
        let n = key.size();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(key, Rat::one());
        EquivClass::new(n, model, coeffs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn model(&self) -> &SurfaceModel {
        &self.model
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, key: &ClassKey) -> Rat {
        self.coeffs.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ClassKey, &Rat)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &EquivClass) -> Result<EquivClass> {
        self.check_compatible(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            accumulate_key(&mut coeffs, k.clone(), v.clone());
        }
        EquivClass::new(self.n, self.model.clone(), coeffs)
    }

    pub fn scale(&self, factor: &Rat) -> EquivClass {
        if factor.is_zero() {
            return EquivClass::zero(self.model.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, v)| (k.clone(), v * factor))
            .collect();
        EquivClass {
            n: self.n,
            model: self.model.clone(),
            coeffs,
        }
    }

    fn check_compatible(&self, other: &EquivClass) -> Result<()> {
        if self.model != other.model {
            return Err(Error::Mismatch(format!(
                "classes live on different models: {:?} vs {:?}",
                self.model, other.model
            )));
        }
        if self.n != other.n && !self.is_zero() && !other.is_zero() {
            return Err(Error::Mismatch(format!(
                "classes have different point counts: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// The bilinear pairing, diagonal on fixed-point classes.
    pub fn pairing(&self, other: &EquivClass) -> Result<Rat> {
        self.check_compatible(other)?;
        let mut total = Rat::zero();
        for (key, a) in &self.coeffs {
            let b = other.coeff(key);
            if b.is_zero() {
                continue;
            }
            total += a * b * pairing_constant(&self.model, key)?;
        }
        Ok(total)
    }

    /// The middle-degree star product: diagonal on fixed-point classes with
    /// the upper hook product as the idempotent normalization constant.
    pub fn star(&self, other: &EquivClass) -> Result<EquivClass> {
        self.check_compatible(other)?;
        let mut coeffs = BTreeMap::new();
        for (key, a) in &self.coeffs {
            let b = other.coeff(key);
            if b.is_zero() {
                continue;
            }
            accumulate_key(
                &mut coeffs,
                key.clone(),
                a * b * star_constant(&self.model, key)?,
            );
        }
        EquivClass::new(self.n, self.model.clone(), coeffs)
    }

    /// The unit of the star product: the sum of all fixed-point classes, each
    /// divided by its star constant. This also equals the expansion of the
    /// full-multiplicity degree-0 zero-section monomial scaled by `1/n!`
    /// (exactly, with no extra sign; tests pin the equality for small `n`).
    pub fn star_unit(n: usize, model: SurfaceModel) -> Result<EquivClass> {
        model.validate()?;
        let mut coeffs = BTreeMap::new();
        for key in class_keys(&model, n) {
            let c = star_constant(&model, &key)?;
            coeffs.insert(key, Rat::one() / c);
        }
        Ok(EquivClass { n, model, coeffs })
    }

    /// The symmetric-function avatar of a plane-model class: fixed-point
    /// classes map to Jack polynomials at parameter `β/α`; the result is
    /// expanded in the monomial basis. Preserves pairings and carries the
    /// star product to [`sym_idempotent_product`].
    pub fn to_sym(&self) -> Result<SymPoly> {
        let r = self.model.plane_jack_param()?;
        let mut coeffs = BTreeMap::new();
        for (key, c) in &self.coeffs {
            match key {
                ClassKey::Single(la) => {
                    coeffs.insert(la.clone(), c.clone());
                }
                _ => unreachable!("validated on construction"),
            }
        }
        SymPoly::new(self.n, Basis::Jack(r), coeffs)?.convert(&Basis::Monomial)
    }

    /// Inverse of [`to_sym`](Self::to_sym).
    pub fn from_sym(f: &SymPoly, model: &SurfaceModel) -> Result<EquivClass> {
        let r = model.plane_jack_param()?;
        let jack = f.convert(&Basis::Jack(r))?;
        let coeffs = jack
            .iter()
            .map(|(la, c)| (ClassKey::Single(la.clone()), c.clone()))
            .collect();
        EquivClass::new(f.degree(), model.clone(), coeffs)
    }

    /// The tensor avatar of a line-bundle class: fixed-point classes map to
    /// slotwise Jack polynomials at parameters `1` and `1/(γ-1)`; the result
    /// is expanded in the slotwise monomial basis.
    pub fn to_tensor(&self) -> Result<TensorPoly> {
        let bases = self.model.bundle_jack_bases()?;
        let mut coeffs = BTreeMap::new();
        for (key, c) in &self.coeffs {
            match key {
                ClassKey::Pair(bi) => {
                    coeffs.insert(bi.clone(), c.clone());
                }
                _ => unreachable!("validated on construction"),
            }
        }
        TensorPoly::new(self.n, bases, coeffs)?.convert((Basis::Monomial, Basis::Monomial))
    }

    /// Inverse of [`to_tensor`](Self::to_tensor).
    pub fn from_tensor(f: &TensorPoly, model: &SurfaceModel) -> Result<EquivClass> {
        let bases = model.bundle_jack_bases()?;
        let jack = f.convert(bases)?;
        let coeffs = jack
            .iter()
            .map(|(bi, c)| (ClassKey::Pair(bi.clone()), c.clone()))
            .collect();
        EquivClass::new(f.degree(), model.clone(), coeffs)
    }
}

fn accumulate_key(map: &mut BTreeMap<ClassKey, Rat>, key: ClassKey, value: Rat) {
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

/// The diagonal product on symmetric functions transported from the star
/// product of the plane model: Jack polynomials multiply as scaled
/// idempotents with the upper hook product at `(α, β)` as the constant.
pub fn sym_idempotent_product(f: &SymPoly, g: &SymPoly, model: &SurfaceModel) -> Result<SymPoly> {
    if f.degree() != g.degree() {
        return Err(Error::Mismatch("degrees differ".into()));
    }
    let r = model.plane_jack_param()?;
    let (a, b) = model.plane_weights()?;
    let basis = Basis::Jack(r);
    let fj = f.convert(&basis)?;
    let gj = g.convert(&basis)?;
    let mut coeffs = BTreeMap::new();
    for (la, x) in fj.iter() {
        let y = gj.coeff(la);
        if y.is_zero() {
            continue;
        }
        coeffs.insert(la.clone(), x * y * la.upper_hook_product(&a, &b));
    }
    SymPoly::new(f.degree(), basis, coeffs)
}

/// Line-bundle counterpart of [`sym_idempotent_product`] on the tensor
/// square.
pub fn tensor_idempotent_product(
    f: &TensorPoly,
    g: &TensorPoly,
    model: &SurfaceModel,
) -> Result<TensorPoly> {
    if f.degree() != g.degree() {
        return Err(Error::Mismatch("degrees differ".into()));
    }
    let bases = model.bundle_jack_bases()?;
    let (w1, w2) = model.bundle_weights()?;
    let fj = f.convert(bases.clone())?;
    let gj = g.convert(bases.clone())?;
    let mut coeffs = BTreeMap::new();
    for (key, x) in fj.iter() {
        let y = gj.coeff(key);
        if y.is_zero() {
            continue;
        }
        let c = key.first.upper_hook_product(&w1.0, &w1.1)
            * key.second.upper_hook_product(&w2.0, &w2.1);
        coeffs.insert(key.clone(), x * y * c);
    }
    TensorPoly::new(f.degree(), bases, coeffs)
}

/// Basis tags for degree-2 equivariant curve classes of the line bundle.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CurveBasis {
    /// The two invariant fibers.
    Fibers,
    /// The unit class (scaled by the equivariant variable) and the zero
    /// section.
    UnitZeroSection,
}

/// A degree-2 equivariant curve class of the line bundle in one of the two
/// standard bases.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveClass {
    gamma: i64,
    basis: CurveBasis,
    coords: (Rat, Rat),
}

impl CurveClass {
    pub fn new(model: &SurfaceModel, basis: CurveBasis, coords: (Rat, Rat)) -> Result<Self> {
        Ok(CurveClass {
            gamma: model.gamma()?,
            basis,
            coords,
        })
    }

    pub fn basis(&self) -> CurveBasis {
        self.basis
    }

    pub fn coords(&self) -> &(Rat, Rat) {
        &self.coords
    }

    /// Exact 2x2 change of basis. The localization expansions are
    /// `zero section = -fiber₁ + (1-γ)·fiber₂` and `unit = -fiber₁ + fiber₂`;
    /// the matrix has determinant `γ` and is always invertible.
    pub fn change_basis(&self, target: CurveBasis) -> CurveClass {
        if self.basis == target {
            return self.clone();
        }
        let g = rat(self.gamma);
        let (x, y) = &self.coords;
        let coords = match target {
            // (unit, section) coordinates -> fiber coordinates
            CurveBasis::Fibers => (-x - y, x + (Rat::one() - &g) * y),
            // fiber coordinates -> (unit, section) coordinates
            CurveBasis::UnitZeroSection => (((Rat::one() - &g) * x + y) / &g, (-x - y) / &g),
        };
        CurveClass {
            gamma: self.gamma,
            basis: target,
            coords,
        }
    }

    /// Bilinear pairing of curve classes, extended from the fiber pairings
    /// `⟨f₁,f₁⟩ = 1`, `⟨f₂,f₂⟩ = 1/(γ-1)`, `⟨f₁,f₂⟩ = 0`.
    pub fn pairing(&self, other: &CurveClass) -> Result<Rat> {
        if self.gamma != other.gamma {
            return Err(Error::Mismatch(
                "curve classes of different surfaces".into(),
            ));
        }
        let a = self.change_basis(CurveBasis::Fibers);
        let b = other.change_basis(CurveBasis::Fibers);
        let second_weight = Rat::one() / rat(self.gamma - 1);
        Ok(&a.coords.0 * &b.coords.0 + &a.coords.1 * &b.coords.1 * second_weight)
    }
}

/// A finite linear combination of Heisenberg monomials of one family, all of
/// the same total index weight `n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeisCombo {
    model: SurfaceModel,
    basis: HeisBasis,
    n: usize,
    coeffs: BTreeMap<Bipartition, Rat>,
}

impl HeisCombo {
    pub fn new(
        model: SurfaceModel,
        basis: HeisBasis,
        n: usize,
        coeffs: BTreeMap<Bipartition, Rat>,
    ) -> Result<Self> {
        if !matches!(model, SurfaceModel::LineBundle { .. }) {
            return Err(Error::Mismatch(
                "Heisenberg monomial combinations need the line-bundle model".into(),
            ));
        }
        model.validate()?;
        for key in coeffs.keys() {
            if key.total() != n {
                return Err(Error::Mismatch(format!(
                    "monomial {key} has total {} in a weight-{n} combination",
                    key.total()
                )));
            }
        }
        let mut combo = HeisCombo {
            model,
            basis,
            n,
            coeffs,
        };
        combo.coeffs.retain(|_, c| !c.is_zero());
        if combo.coeffs.is_empty() {
            combo.n = 0;
        }
        Ok(combo)
    }

    pub fn zero(model: SurfaceModel, basis: HeisBasis) -> Result<Self> {
        HeisCombo::new(model, basis, 0, BTreeMap::new())
    }

    pub fn monomial(model: SurfaceModel, monomial: &HeisMonomial) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(monomial.label.clone(), Rat::one());
        HeisCombo::new(model, monomial.basis, monomial.label.total(), coeffs)
    }

    pub fn model(&self) -> &SurfaceModel {
        &self.model
    }

    pub fn basis(&self) -> HeisBasis {
        self.basis
    }

    pub fn n(&self) -> usize {
        self.n
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

    pub fn add(&self, other: &HeisCombo) -> Result<HeisCombo> {
        if self.model != other.model || self.basis != other.basis {
            return Err(Error::Mismatch("combination shapes differ".into()));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.n != other.n {
            return Err(Error::Mismatch("combination weights differ".into()));
        }
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            accumulate_bi(&mut coeffs, k.clone(), v.clone());
        }
        HeisCombo::new(self.model.clone(), self.basis, self.n, coeffs)
    }

    pub fn scale(&self, factor: &Rat) -> HeisCombo {
        let coeffs = if factor.is_zero() {
            BTreeMap::new()
        } else {
            self.coeffs
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect()
        };
        HeisCombo {
            model: self.model.clone(),
            basis: self.basis,
            n: self.n,
            coeffs,
        }
    }

    /// Change between the zero-section and fiber families by substituting the
    /// 2x2 curve-class basis change into every operator factor.
    pub fn change_basis(&self, target: HeisBasis) -> Result<HeisCombo> {
        if self.basis == target {
            return Ok(self.clone());
        }
        let (sub_first, sub_second) = match target {
            HeisBasis::Fiber => {
                let unit = CurveClass::new(
                    &self.model,
                    CurveBasis::UnitZeroSection,
                    (Rat::one(), Rat::zero()),
                )?
                .change_basis(CurveBasis::Fibers);
                let section = CurveClass::new(
                    &self.model,
                    CurveBasis::UnitZeroSection,
                    (Rat::zero(), Rat::one()),
                )?
                .change_basis(CurveBasis::Fibers);
                (unit.coords.clone(), section.coords.clone())
            }
            HeisBasis::ZeroSection => {
                let fiber1 =
                    CurveClass::new(&self.model, CurveBasis::Fibers, (Rat::one(), Rat::zero()))?
                        .change_basis(CurveBasis::UnitZeroSection);
                let fiber2 =
                    CurveClass::new(&self.model, CurveBasis::Fibers, (Rat::zero(), Rat::one()))?
                        .change_basis(CurveBasis::UnitZeroSection);
                (fiber1.coords.clone(), fiber2.coords.clone())
            }
        };
        let mut coeffs = BTreeMap::new();
        for (key, c) in &self.coeffs {
            for (new_key, value) in substitute_monomial(key, c, &sub_first, &sub_second) {
                accumulate_bi(&mut coeffs, new_key, value);
            }
        }
        HeisCombo::new(self.model.clone(), target, self.n, coeffs)
    }

    /// Fiber-family combinations coincide with Fock states coefficientwise.
    pub fn to_fock(&self) -> Result<FockState> {
        let fiber = self.change_basis(HeisBasis::Fiber)?;
        let poly = TensorPoly::new(fiber.n, (Basis::Power, Basis::Power), fiber.coeffs)?;
        FockState::from_tensor(&self.model, poly)
    }

    pub fn from_fock(state: &FockState) -> Result<HeisCombo> {
        let tensor = state.as_tensor()?;
        let coeffs = tensor.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        HeisCombo::new(
            state.model().clone(),
            HeisBasis::Fiber,
            tensor.degree(),
            coeffs,
        )
    }

    /// Expands the combination in the fixed-point basis: fiber monomials are
    /// slotwise power products, and the slotwise Jack transitions carry them
    /// onto the distinguished classes.
    pub fn to_fixed_point(&self) -> Result<EquivClass> {
        let fiber = self.change_basis(HeisBasis::Fiber)?;
        let power = TensorPoly::new(fiber.n, (Basis::Power, Basis::Power), fiber.coeffs)?;
        let jack = power.convert(self.model.bundle_jack_bases()?)?;
        let coeffs = jack
            .iter()
            .map(|(bi, c)| (ClassKey::Pair(bi.clone()), c.clone()))
            .collect();
        EquivClass::new(self.n, self.model.clone(), coeffs)
    }

    /// Inverse of [`to_fixed_point`](Self::to_fixed_point), landing in the
    /// requested family.
    pub fn from_fixed_point(class: &EquivClass, basis: HeisBasis) -> Result<HeisCombo> {
        let mut coeffs = BTreeMap::new();
        for (key, c) in class.iter() {
            match key {
                ClassKey::Pair(bi) => {
                    coeffs.insert(bi.clone(), c.clone());
                }
                ClassKey::Single(_) => {
                    return Err(Error::Mismatch(
                        "plane-model classes have no Heisenberg monomial expansion".into(),
                    ))
                }
            }
        }
        let jack = TensorPoly::new(class.n(), class.model().bundle_jack_bases()?, coeffs)?;
        let power = jack.convert((Basis::Power, Basis::Power))?;
        let combo = HeisCombo::new(
            class.model().clone(),
            HeisBasis::Fiber,
            class.n(),
            power.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        )?;
        combo.change_basis(basis)
    }

    /// Terms of one ordinary cohomological degree (zero-section family).
    pub fn graded_part(&self, degree: usize) -> Result<HeisCombo> {
        if self.basis != HeisBasis::ZeroSection {
            return Err(Error::Mismatch(
                "the cohomological grading lives on the zero-section family".into(),
            ));
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(key, _)| {
                HeisMonomial::new((*key).clone(), self.basis).cohomological_degree() == degree
            })
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        HeisCombo::new(self.model.clone(), self.basis, self.n, coeffs)
    }

    /// Largest cohomological degree appearing in the combination.
    pub fn max_cohomological_degree(&self) -> Result<Option<usize>> {
        if self.basis != HeisBasis::ZeroSection {
            return Err(Error::Mismatch(
                "the cohomological grading lives on the zero-section family".into(),
            ));
        }
        Ok(self
            .coeffs
            .keys()
            .map(|key| HeisMonomial::new(key.clone(), self.basis).cohomological_degree())
            .max())
    }
}

/// Expands one monomial under a linear substitution of the two generator
/// families: every index-`k` factor of the first slot becomes
/// `a₁·(first slot) + b₁·(second slot)` and likewise for the second.
fn substitute_monomial(
    key: &Bipartition,
    coeff: &Rat,
    sub_first: &(Rat, Rat),
    sub_second: &(Rat, Rat),
) -> BTreeMap<Bipartition, Rat> {
    let mut current: BTreeMap<Bipartition, Rat> = BTreeMap::new();
    current.insert(
        Bipartition::new(Partition::empty(), Partition::empty()),
        coeff.clone(),
    );
    let factors = key
        .first
        .parts()
        .iter()
        .map(|&k| (k, sub_first))
        .chain(key.second.parts().iter().map(|&k| (k, sub_second)));
    for (k, (a, b)) in factors {
        let mut next = BTreeMap::new();
        for (partial, c) in &current {
            accumulate_bi(
                &mut next,
                Bipartition::new(partial.first.with_part(k), partial.second.clone()),
                c * a,
            );
            accumulate_bi(
                &mut next,
                Bipartition::new(partial.first.clone(), partial.second.with_part(k)),
                c * b,
            );
        }
        current = next;
    }
    current
}

/// The full star product of two zero-section-family combinations, pulled all
/// the way back to the zero-section family with no grading projection.
pub fn heis_star(a: &HeisCombo, b: &HeisCombo) -> Result<HeisCombo> {
    let ca = a.to_fixed_point()?;
    let cb = b.to_fixed_point()?;
    let prod = ca.star(&cb)?;
    HeisCombo::from_fixed_point(&prod, HeisBasis::ZeroSection)
}

/// The ordinary cup product of two zero-section-family monomials: transit to
/// the fixed-point basis, multiply there, come back, and keep the graded
/// piece whose degree is the sum of the input degrees. A degree sum beyond
/// twice the point count lands in an empty graded piece and returns zero.
pub fn ordinary_cup(a: &HeisMonomial, b: &HeisMonomial, model: &SurfaceModel) -> Result<HeisCombo> {
    if a.basis != HeisBasis::ZeroSection || b.basis != HeisBasis::ZeroSection {
        return Err(Error::Mismatch(
            "the cup product is defined on the zero-section family".into(),
        ));
    }
    if a.label.total() != b.label.total() {
        return Err(Error::Mismatch(format!(
            "cup product needs equal point counts, got {} and {}",
            a.label.total(),
            b.label.total()
        )));
    }
    let ca = HeisCombo::monomial(model.clone(), a)?;
    let cb = HeisCombo::monomial(model.clone(), b)?;
    let full = heis_star(&ca, &cb)?;
    full.graded_part(a.cohomological_degree() + b.cohomological_degree())
}

/// Which multiplication table to export.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TableBasis {
    /// The diagonal fixed-point table of the star product.
    FixedPoint,
    /// The ordinary cup product on the zero-section monomial basis.
    Graded,
}

/// One row of a multiplication table: `left · right ∋ coeff · term`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TableRow {
    pub left: ClassKey,
    pub right: ClassKey,
    pub term: ClassKey,
    pub coeff: Rat,
}

/// A complete multiplication table in canonical row order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructureTable {
    pub model: SurfaceModel,
    pub n: usize,
    pub basis: TableBasis,
    pub rows: Vec<TableRow>,
}

/// The complete multiplication table at point count `n`. Zero products are
/// omitted, so the fixed-point table lists exactly the diagonal.
pub fn structure_constants(
    n: usize,
    model: &SurfaceModel,
    basis: TableBasis,
) -> Result<StructureTable> {
    model.validate()?;
    let mut rows = Vec::new();
    match basis {
        TableBasis::FixedPoint => {
            for key in class_keys(model, n) {
                rows.push(TableRow {
                    left: key.clone(),
                    right: key.clone(),
                    term: key.clone(),
                    coeff: star_constant(model, &key)?,
                });
            }
        }
        TableBasis::Graded => {
            if !matches!(model, SurfaceModel::LineBundle { .. }) {
                return Err(Error::Mismatch(
                    "the graded table needs the line-bundle model".into(),
                ));
            }
            let labels = bipartitions_of(n);
            for left in &labels {
                for right in &labels {
                    let cup = ordinary_cup(
                        &HeisMonomial::new(left.clone(), HeisBasis::ZeroSection),
                        &HeisMonomial::new(right.clone(), HeisBasis::ZeroSection),
                        model,
                    )?;
                    for (term, coeff) in cup.iter() {
                        rows.push(TableRow {
                            left: ClassKey::Pair(left.clone()),
                            right: ClassKey::Pair(right.clone()),
                            term: ClassKey::Pair(term.clone()),
                            coeff: coeff.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(StructureTable {
        model: model.clone(),
        n,
        basis,
        rows,
    })
}
