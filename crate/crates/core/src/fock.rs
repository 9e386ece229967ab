//! Heisenberg operator calculus on the symmetric-function realization of the
//! direct sum of middle-degree equivariant cohomology groups.
//!
//! For the plane model the whole space is a single polynomial ring and the
//! negative-index operator for the invariant axis acts as multiplication by a
//! power sum. For the line-bundle model there is one tensor slot per
//! invariant fiber. Positive-index operators are the adjoints with respect to
//! the deformed bilinear form; concretely `k ⟨Y,Y⟩ ∂/∂p_k` on the matching
//! slot, where `⟨Y,Y⟩` is the self-pairing of the curve class. The
//! adjointness and the Heisenberg commutation relation are verified by the
//! test suite rather than assumed.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hilb::{CurveBasis, CurveClass, SurfaceModel};
use crate::partition::{Bipartition, Partition};
use crate::rational::{rat, Rat};
use crate::symfunc::{inner_product, tensor_inner_product, Basis, SymPoly, TensorPoly};

/// A distinguished invariant curve, the label of a Heisenberg generator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CurveLabel {
    /// The invariant axis of the plane model.
    PlaneAxis,
    /// The fiber over the first torus-fixed point of the base (line bundle).
    Fiber1,
    /// The fiber over the second torus-fixed point (line bundle).
    Fiber2,
}

/// An element of the Fock space, stored in the unnormalized power-sum basis
/// (plane) or the slotwise power-sum tensor basis (line bundle).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FockState {
    model: SurfaceModel,
    rep: Rep,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Rep {
    Plane(SymPoly),
    Bundle(TensorPoly),
}

impl FockState {
    /// The highest weight vector: coefficient 1 in degree 0.
    pub fn vacuum(model: &SurfaceModel) -> Result<FockState> {
        model.validate()?;
        let rep = match model {
            SurfaceModel::Plane { .. } => Rep::Plane(SymPoly::one(Basis::Power)),
            SurfaceModel::LineBundle { .. } => {
                Rep::Bundle(TensorPoly::one((Basis::Power, Basis::Power)))
            }
        };
        Ok(FockState {
            model: model.clone(),
            rep,
        })
    }

    pub fn zero(model: &SurfaceModel) -> FockState {
        let rep = match model {
            SurfaceModel::Plane { .. } => Rep::Plane(SymPoly::zero(Basis::Power)),
            SurfaceModel::LineBundle { .. } => {
                Rep::Bundle(TensorPoly::zero((Basis::Power, Basis::Power)))
            }
        };
        FockState {
            model: model.clone(),
            rep,
        }
    }

    /// The unnormalized power-sum monomial state of the plane model.
    pub fn power_monomial(model: &SurfaceModel, la: &Partition) -> Result<FockState> {
        match model {
            SurfaceModel::Plane { .. } => Ok(FockState {
                model: model.clone(),
                rep: Rep::Plane(SymPoly::basis_element(Basis::Power, la.clone())?),
            }),
            _ => Err(Error::Mismatch(
                "power monomial state needs the plane model".into(),
            )),
        }
    }

    /// The slotwise power-sum monomial state of the line-bundle model.
    pub fn tensor_power_monomial(model: &SurfaceModel, key: &Bipartition) -> Result<FockState> {
        match model {
            SurfaceModel::LineBundle { .. } => Ok(FockState {
                model: model.clone(),
                rep: Rep::Bundle(TensorPoly::basis_element(
                    (Basis::Power, Basis::Power),
                    key.clone(),
                )?),
            }),
            _ => Err(Error::Mismatch(
                "tensor monomial state needs the line-bundle model".into(),
            )),
        }
    }

    /// Wraps an existing plane-model element (power basis required).
    pub fn from_sym(model: &SurfaceModel, poly: SymPoly) -> Result<FockState> {
        match model {
            SurfaceModel::Plane { .. } => {
                if *poly.basis() != Basis::Power {
                    return Err(Error::Mismatch(
                        "Fock states are stored in the power basis".into(),
                    ));
                }
                Ok(FockState {
                    model: model.clone(),
                    rep: Rep::Plane(poly),
                })
            }
            _ => Err(Error::Mismatch("plane states need the plane model".into())),
        }
    }

    /// Wraps an existing tensor element (slotwise power basis required).
    pub fn from_tensor(model: &SurfaceModel, poly: TensorPoly) -> Result<FockState> {
        match model {
            SurfaceModel::LineBundle { .. } => {
                if *poly.bases() != (Basis::Power, Basis::Power) {
                    return Err(Error::Mismatch(
                        "Fock tensor states are stored in the power basis".into(),
                    ));
                }
                Ok(FockState {
                    model: model.clone(),
                    rep: Rep::Bundle(poly),
                })
            }
            _ => Err(Error::Mismatch(
                "tensor states need the line-bundle model".into(),
            )),
        }
    }

    pub fn model(&self) -> &SurfaceModel {
        &self.model
    }

    pub fn degree(&self) -> usize {
        match &self.rep {
            Rep::Plane(f) => f.degree(),
            Rep::Bundle(f) => f.degree(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.rep {
            Rep::Plane(f) => f.is_zero(),
            Rep::Bundle(f) => f.is_zero(),
        }
    }

    /// Plane states: the underlying power-basis element.
    pub fn as_sym(&self) -> Result<&SymPoly> {
        match &self.rep {
            Rep::Plane(f) => Ok(f),
            Rep::Bundle(_) => Err(Error::Mismatch(
                "state belongs to the line-bundle model".into(),
            )),
        }
    }

    /// Line-bundle states: the underlying tensor element.
    pub fn as_tensor(&self) -> Result<&TensorPoly> {
        match &self.rep {
            Rep::Bundle(f) => Ok(f),
            Rep::Plane(_) => Err(Error::Mismatch("state belongs to the plane model".into())),
        }
    }

    pub fn add(&self, other: &FockState) -> Result<FockState> {
        if self.model != other.model {
            return Err(Error::Mismatch(
                "cannot add states of different models".into(),
            ));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let rep = match (&self.rep, &other.rep) {
            (Rep::Plane(a), Rep::Plane(b)) => Rep::Plane(a.add(b)?),
            (Rep::Bundle(a), Rep::Bundle(b)) => Rep::Bundle(a.add(b)?),
            _ => unreachable!("model equality checked"),
        };
        Ok(FockState {
            model: self.model.clone(),
            rep,
        })
    }

    pub fn scale(&self, factor: &Rat) -> FockState {
        let rep = match &self.rep {
            Rep::Plane(f) => Rep::Plane(f.scale(factor)),
            Rep::Bundle(f) => Rep::Bundle(f.scale(factor)),
        };
        FockState {
            model: self.model.clone(),
            rep,
        }
    }

    pub fn sub(&self, other: &FockState) -> Result<FockState> {
        self.add(&other.scale(&-Rat::one()))
    }

    fn check_curve(&self, curve: CurveLabel) -> Result<()> {
        match (&self.model, curve) {
            (SurfaceModel::Plane { .. }, CurveLabel::PlaneAxis) => Ok(()),
            (SurfaceModel::LineBundle { .. }, CurveLabel::Fiber1 | CurveLabel::Fiber2) => Ok(()),
            _ => Err(Error::Mismatch(format!(
                "curve {curve:?} does not live on {:?}",
                self.model
            ))),
        }
    }

    /// Creation operator: multiplication by the power sum `p_k` on the slot
    /// matching the curve. Raises the degree by `k`.
    pub fn create(&self, k: usize, curve: CurveLabel) -> Result<FockState> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "operator index must be nonzero".into(),
            ));
        }
        self.check_curve(curve)?;
        let rep = match &self.rep {
            Rep::Plane(f) => {
                let mut coeffs = BTreeMap::new();
                for (la, c) in f.iter() {
                    coeffs.insert(la.with_part(k), c.clone());
                }
                Rep::Plane(SymPoly::new(f.degree() + k, Basis::Power, coeffs)?)
            }
            Rep::Bundle(f) => {
                let mut coeffs = BTreeMap::new();
                for (key, c) in f.iter() {
                    let new_key = match curve {
                        CurveLabel::Fiber1 => {
                            Bipartition::new(key.first.with_part(k), key.second.clone())
                        }
                        _ => Bipartition::new(key.first.clone(), key.second.with_part(k)),
                    };
                    coeffs.insert(new_key, c.clone());
                }
                Rep::Bundle(TensorPoly::new(
                    f.degree() + k,
                    (Basis::Power, Basis::Power),
                    coeffs,
                )?)
            }
        };
        Ok(FockState {
            model: self.model.clone(),
            rep,
        })
    }

    /// Annihilation operator: the adjoint of [`create`](Self::create), acting
    /// as `k ⟨Y,Y⟩ ∂/∂p_k` on the matching slot.
    pub fn annihilate(&self, k: usize, curve: CurveLabel) -> Result<FockState> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "operator index must be nonzero".into(),
            ));
        }
        self.check_curve(curve)?;
        let weight = curve_pairing(&self.model, curve, curve)? * rat(k as i64);
        let degree = self.degree().saturating_sub(k);
        let rep = match &self.rep {
            Rep::Plane(f) => {
                let mut coeffs = BTreeMap::new();
                for (la, c) in f.iter() {
                    let mult = la.multiplicity(k);
                    if mult == 0 {
                        continue;
                    }
                    let reduced = la.without_part(k).expect("part present");
                    coeffs.insert(reduced, c * &weight * rat(mult as i64));
                }
                Rep::Plane(SymPoly::new(degree, Basis::Power, coeffs)?)
            }
            Rep::Bundle(f) => {
                let mut coeffs = BTreeMap::new();
                for (key, c) in f.iter() {
                    let slot = match curve {
                        CurveLabel::Fiber1 => &key.first,
                        _ => &key.second,
                    };
                    let mult = slot.multiplicity(k);
                    if mult == 0 {
                        continue;
                    }
                    let reduced = slot.without_part(k).expect("part present");
                    let new_key = match curve {
                        CurveLabel::Fiber1 => Bipartition::new(reduced, key.second.clone()),
                        _ => Bipartition::new(key.first.clone(), reduced),
                    };
                    coeffs.insert(new_key, c * &weight * rat(mult as i64));
                }
                Rep::Bundle(TensorPoly::new(
                    degree,
                    (Basis::Power, Basis::Power),
                    coeffs,
                )?)
            }
        };
        Ok(FockState {
            model: self.model.clone(),
            rep,
        })
    }

    /// The signed-index operator: negative indices create, positive indices
    /// annihilate, index zero is the zero operator.
    pub fn apply(&self, k: i64, curve: CurveLabel) -> Result<FockState> {
        match k.cmp(&0) {
            std::cmp::Ordering::Less => self.create((-k) as usize, curve),
            std::cmp::Ordering::Greater => self.annihilate(k as usize, curve),
            std::cmp::Ordering::Equal => Ok(FockState::zero(&self.model)),
        }
    }

    /// `(𝔭_k(Y₁) 𝔭_l(Y₂) − 𝔭_l(Y₂) 𝔭_k(Y₁))` applied to the state. The
    /// Heisenberg relation says this equals `k δ_{k,-l} ⟨Y₁,Y₂⟩` times the
    /// state.
    pub fn commutator(
        &self,
        k: i64,
        curve1: CurveLabel,
        l: i64,
        curve2: CurveLabel,
    ) -> Result<FockState> {
        let first = self.apply(l, curve2)?.apply(k, curve1)?;
        let second = self.apply(k, curve1)?.apply(l, curve2)?;
        first.sub(&second)
    }

    /// The bilinear form of the ambient model.
    pub fn pairing(&self, other: &FockState) -> Result<Rat> {
        if self.model != other.model {
            return Err(Error::Mismatch(
                "cannot pair states of different models".into(),
            ));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Rat::zero());
        }
        match (&self.rep, &other.rep) {
            (Rep::Plane(a), Rep::Plane(b)) => inner_product(a, b, &self.model.plane_jack_param()?),
            (Rep::Bundle(a), Rep::Bundle(b)) => {
                let (r1, r2) = self.model.bundle_jack_params()?;
                tensor_inner_product(a, b, &r1, &r2)
            }
            _ => unreachable!("model equality checked"),
        }
    }
}

/// Pairing of two invariant curve classes: the plane axis pairs with itself
/// to `β/α`; the two fibers are orthogonal with self-pairings `1` and
/// `1/(γ-1)`.
pub fn curve_pairing(model: &SurfaceModel, y1: CurveLabel, y2: CurveLabel) -> Result<Rat> {
    match (model, y1, y2) {
        (SurfaceModel::Plane { .. }, CurveLabel::PlaneAxis, CurveLabel::PlaneAxis) => {
            model.plane_jack_param()
        }
        (SurfaceModel::LineBundle { .. }, CurveLabel::Fiber1, CurveLabel::Fiber1) => Ok(Rat::one()),
        (SurfaceModel::LineBundle { .. }, CurveLabel::Fiber2, CurveLabel::Fiber2) => {
            let (_, r2) = model.bundle_jack_params()?;
            Ok(r2)
        }
        (SurfaceModel::LineBundle { .. }, CurveLabel::Fiber1, CurveLabel::Fiber2)
        | (SurfaceModel::LineBundle { .. }, CurveLabel::Fiber2, CurveLabel::Fiber1) => {
            Ok(Rat::zero())
        }
        _ => Err(Error::Mismatch(format!(
            "curves {y1:?}, {y2:?} do not both live on {model:?}"
        ))),
    }
}

/// Tag for the two families of Heisenberg monomial states on the line-bundle
/// model.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum HeisBasis {
    /// Operators labelled by the unit class and the zero section. This family
    /// carries the cohomological grading and descends to ordinary cohomology.
    ZeroSection,
    /// Operators labelled by the two fibers; matches the tensor splitting.
    Fiber,
}

/// A Heisenberg monomial state: a product of negative operators applied to
/// the vacuum, one partition of operator indices per generator family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeisMonomial {
    pub label: Bipartition,
    pub basis: HeisBasis,
}

impl HeisMonomial {
    pub fn new(label: Bipartition, basis: HeisBasis) -> Self {
        HeisMonomial { label, basis }
    }

    /// Ordinary cohomological degree of a zero-section-family monomial: an
    /// index-`k` unit-class operator contributes `2k-2`, an index-`k`
    /// zero-section operator contributes `2k`.
    pub fn cohomological_degree(&self) -> usize {
        2 * (self.label.first.size() - self.label.first.length()) + 2 * self.label.second.size()
    }
}

/// The Heisenberg monomial state of the line-bundle model. Fiber-family
/// monomials are slotwise power products; zero-section-family monomials
/// expand each operator through the curve-class basis change.
pub fn heis_monomial(model: &SurfaceModel, monomial: &HeisMonomial) -> Result<FockState> {
    if !matches!(model, SurfaceModel::LineBundle { .. }) {
        return Err(Error::Mismatch(
            "Heisenberg monomial states need the line-bundle model".into(),
        ));
    }
    match monomial.basis {
        HeisBasis::Fiber => FockState::tensor_power_monomial(model, &monomial.label),
        HeisBasis::ZeroSection => {
            let unit_coords = CurveClass::new(
                model,
                CurveBasis::UnitZeroSection,
                (Rat::one(), Rat::zero()),
            )?
            .change_basis(CurveBasis::Fibers);
            let section_coords = CurveClass::new(
                model,
                CurveBasis::UnitZeroSection,
                (Rat::zero(), Rat::one()),
            )?
            .change_basis(CurveBasis::Fibers);
            let mut state = FockState::vacuum(model)?;
            for (slot, coords) in [
                (&monomial.label.first, unit_coords.coords()),
                (&monomial.label.second, section_coords.coords()),
            ] {
                for &k in slot.parts() {
                    let via_first = state.create(k, CurveLabel::Fiber1)?.scale(&coords.0);
                    let via_second = state.create(k, CurveLabel::Fiber2)?.scale(&coords.1);
                    state = via_first.add(&via_second)?;
                }
            }
            Ok(state)
        }
    }
}

/// Outcome of a sweep of the Heisenberg commutation relation over all basis
/// states and operator indices up to a bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeisenbergReport {
    pub model: SurfaceModel,
    pub max_degree: usize,
    pub cases: usize,
    pub passed: bool,
    pub message: String,
}

/// Checks `[𝔭_k(Y₁), 𝔭_l(Y₂)] = k δ_{k,-l} ⟨Y₁,Y₂⟩ Id` on every basis state
/// of degree at most `max_degree`, for all curve pairs and all nonzero
/// indices with `|k|, |l| ≤ max_degree`.
pub fn heisenberg_check(model: &SurfaceModel, max_degree: usize) -> Result<HeisenbergReport> {
    model.validate()?;
    let curves: &[CurveLabel] = match model {
        SurfaceModel::Plane { .. } => &[CurveLabel::PlaneAxis],
        SurfaceModel::LineBundle { .. } => &[CurveLabel::Fiber1, CurveLabel::Fiber2],
    };
    let mut states = Vec::new();
    for d in 0..=max_degree {
        match model {
            SurfaceModel::Plane { .. } => {
                for la in crate::partition::partitions_of(d) {
                    states.push(FockState::power_monomial(model, &la)?);
                }
            }
            SurfaceModel::LineBundle { .. } => {
                for key in crate::partition::bipartitions_of(d) {
                    states.push(FockState::tensor_power_monomial(model, &key)?);
                }
            }
        }
    }
    let bound = max_degree as i64;
    let mut cases = 0usize;
    for state in &states {
        for &y1 in curves {
            for &y2 in curves {
                for k in -bound..=bound {
                    if k == 0 {
                        continue;
                    }
                    for l in -bound..=bound {
                        if l == 0 {
                            continue;
                        }
                        let got = state.commutator(k, y1, l, y2)?;
                        let expected = if k == -l {
                            state.scale(&(rat(k) * curve_pairing(model, y1, y2)?))
                        } else {
                            FockState::zero(model)
                        };
                        cases += 1;
                        if got != expected {
                            return Ok(HeisenbergReport {
                                model: model.clone(),
                                max_degree,
                                cases,
                                passed: false,
                                message: format!(
                                    "commutator mismatch at k={k}, l={l}, curves {y1:?}/{y2:?} \
                                     on a degree-{} state",
                                    state.degree()
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(HeisenbergReport {
        model: model.clone(),
        max_degree,
        cases,
        passed: true,
        message: "all commutators match".into(),
    })
}
