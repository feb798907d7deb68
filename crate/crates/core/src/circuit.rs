//! Layer-level circuit IR and forward evaluation.
//!
//! A [`CircuitSpec`] is an ordered list of layers — encoding, variational,
//! entangler, measurement — already expanded across re-upload blocks. Feature
//! values enter through RY angle embedding; trainable parameters live in a
//! flat slot vector referenced by the layers. Evaluation is exact statevector
//! simulation followed by Z-string expectation values.
//!
//! Two builders cover the model families used here:
//! - [`build_qsm`]: encoding → (variational → entangler) × layers per
//!   re-upload block, hardware-efficient RX·RY·RZ triples per qubit.
//! - [`build_su_symmetric`]: a two-qubit family in which every operation is
//!   permutation-symmetric (shared rotation triples, trainable ZZ coupling,
//!   symmetric mean-Z measurement), confining the state to the symmetric
//!   subspace.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{Gate, Observable, StateVector};

/// Measured latent vector `z(x) = (⟨O_1⟩, ..., ⟨O_m⟩)`.
pub type LatentVector = Vec<f64>;

/// How an encoding layer maps features to RY rotations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum EncodingMap {
    /// Feature `j` becomes `RY(x_j)` on qubit `j`; qubits beyond the feature
    /// count are left untouched (an implicit `RY(0)`).
    PerQubit,
    /// One feature becomes the same `RY(x_f)` on every qubit.
    Broadcast { feature: usize },
}

/// Fixed entangling patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntanglerPattern {
    /// `CNOT(q, q+1 mod k)` for `q = 0..k-1`; no gates on one qubit.
    RingCnot,
    /// `CNOT(i, j)` for all `i < j`.
    FullCnot,
    /// `ZZ(θ)` on every pair `i < j` with one shared trainable angle.
    SymmetricZz,
}

impl EntanglerPattern {
    pub fn parse(s: &str) -> Result<Option<EntanglerPattern>> {
        match s {
            "ring_cnot" => Ok(Some(EntanglerPattern::RingCnot)),
            "full_cnot" => Ok(Some(EntanglerPattern::FullCnot)),
            "symmetric_zz" => Ok(Some(EntanglerPattern::SymmetricZz)),
            "none" => Ok(None),
            other => Err(Error::Configuration(format!(
                "unknown entangler pattern `{other}` (expected ring_cnot, full_cnot, symmetric_zz, none)"
            ))),
        }
    }
}

/// Per-qubit or shared (RX, RY, RZ) parameter slot triples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum VariationalLayer {
    /// One independent triple per qubit, in qubit order.
    PerQubit { slots: Vec<[usize; 3]> },
    /// The same triple applied to every qubit (permutation-symmetric).
    Shared { slots: [usize; 3] },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglerLayer {
    pub pattern: EntanglerPattern,
    /// Trainable angle slot; present exactly when the pattern is SymmetricZz.
    pub angle_slot: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LayerSpec {
    Encoding(EncodingMap),
    Variational(VariationalLayer),
    Entangler(EntanglerLayer),
    Measurement(Vec<Observable>),
}

/// A fully expanded circuit: layer list, qubit count, and parameter budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub num_qubits: usize,
    pub layers: Vec<LayerSpec>,
    pub num_reuploads: usize,
    pub num_parameters: usize,
}

/// A gate with the parameter slot it was resolved from, if trainable.
#[derive(Clone, Copy, Debug)]
pub struct ResolvedGate {
    pub gate: Gate,
    pub slot: Option<usize>,
}

impl CircuitSpec {
    /// Validates layer structure and derives the parameter count.
    ///
    /// Exactly one measurement layer is required, it must come last and carry
    /// at least one observable, and the slot indices referenced by the layers
    /// must be unique and contiguous from zero.
    pub fn from_layers(
        num_qubits: usize,
        layers: Vec<LayerSpec>,
        num_reuploads: usize,
    ) -> Result<CircuitSpec> {
        if num_qubits < 1 {
            return Err(Error::Configuration("circuit needs at least one qubit".into()));
        }
        if num_reuploads < 1 {
            return Err(Error::Configuration("num_reuploads must be >= 1".into()));
        }
        let measurement_count = layers
            .iter()
            .filter(|l| matches!(l, LayerSpec::Measurement(_)))
            .count();
        if measurement_count != 1 || !matches!(layers.last(), Some(LayerSpec::Measurement(_))) {
            return Err(Error::Configuration(
                "circuit must end with exactly one measurement layer".into(),
            ));
        }

        let mut slots = Vec::new();
        for layer in &layers {
            match layer {
                LayerSpec::Encoding(_) => {}
                LayerSpec::Variational(VariationalLayer::PerQubit { slots: triples }) => {
                    if triples.len() != num_qubits {
                        return Err(Error::Shape(format!(
                            "variational layer has {} triples for {num_qubits} qubits",
                            triples.len()
                        )));
                    }
                    for t in triples {
                        slots.extend_from_slice(t);
                    }
                }
                LayerSpec::Variational(VariationalLayer::Shared { slots: t }) => {
                    slots.extend_from_slice(t);
                }
                LayerSpec::Entangler(e) => {
                    match (e.pattern, e.angle_slot) {
                        (EntanglerPattern::SymmetricZz, Some(s)) => slots.push(s),
                        (EntanglerPattern::SymmetricZz, None) => {
                            return Err(Error::Configuration(
                                "symmetric_zz entangler needs an angle slot".into(),
                            ));
                        }
                        (_, Some(_)) => {
                            return Err(Error::Configuration(
                                "only symmetric_zz entanglers take an angle slot".into(),
                            ));
                        }
                        (_, None) => {}
                    }
                }
                LayerSpec::Measurement(observables) => {
                    if observables.is_empty() {
                        return Err(Error::Configuration(
                            "measurement layer needs at least one observable".into(),
                        ));
                    }
                    for obs in observables {
                        if let Some(q) = obs.max_qubit() {
                            if q >= num_qubits {
                                return Err(Error::Index(format!(
                                    "observable acts on qubit {q} of a {num_qubits}-qubit circuit"
                                )));
                            }
                        }
                    }
                }
            }
        }

        let mut sorted = slots.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != slots.len() || sorted.iter().enumerate().any(|(i, s)| i != *s) {
            return Err(Error::Configuration(
                "parameter slots must be unique and contiguous from zero".into(),
            ));
        }

        Ok(CircuitSpec {
            num_qubits,
            layers,
            num_reuploads,
            num_parameters: sorted.len(),
        })
    }

    /// Observables of the final measurement layer.
    pub fn observables(&self) -> &[Observable] {
        match self.layers.last() {
            Some(LayerSpec::Measurement(obs)) => obs,
            _ => &[],
        }
    }

    /// Number of measured latent values.
    pub fn num_observables(&self) -> usize {
        self.observables().len()
    }

    fn check_inputs(&self, features: &[f64], params: &[f64]) -> Result<()> {
        if params.len() != self.num_parameters {
            return Err(Error::Shape(format!(
                "expected {} parameters, got {}",
                self.num_parameters,
                params.len()
            )));
        }
        for layer in &self.layers {
            match layer {
                LayerSpec::Encoding(EncodingMap::PerQubit) => {
                    if features.len() > self.num_qubits {
                        return Err(Error::Shape(format!(
                            "{} features exceed {} qubits",
                            features.len(),
                            self.num_qubits
                        )));
                    }
                }
                LayerSpec::Encoding(EncodingMap::Broadcast { feature }) => {
                    if *feature >= features.len() {
                        return Err(Error::Shape(format!(
                            "encoding references feature {feature} but only {} provided",
                            features.len()
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn layer_gates(&self, layer: &LayerSpec, features: &[f64], params: &[f64], out: &mut Vec<ResolvedGate>) {
        match layer {
            LayerSpec::Encoding(EncodingMap::PerQubit) => {
                for (q, x) in features.iter().enumerate() {
                    out.push(ResolvedGate {
                        gate: Gate::Ry { qubit: q, angle: *x },
                        slot: None,
                    });
                }
            }
            LayerSpec::Encoding(EncodingMap::Broadcast { feature }) => {
                let x = features[*feature];
                for q in 0..self.num_qubits {
                    out.push(ResolvedGate {
                        gate: Gate::Ry { qubit: q, angle: x },
                        slot: None,
                    });
                }
            }
            LayerSpec::Variational(v) => {
                for q in 0..self.num_qubits {
                    let triple = match v {
                        VariationalLayer::PerQubit { slots } => slots[q],
                        VariationalLayer::Shared { slots } => *slots,
                    };
                    out.push(ResolvedGate {
                        gate: Gate::Rx { qubit: q, angle: params[triple[0]] },
                        slot: Some(triple[0]),
                    });
                    out.push(ResolvedGate {
                        gate: Gate::Ry { qubit: q, angle: params[triple[1]] },
                        slot: Some(triple[1]),
                    });
                    out.push(ResolvedGate {
                        gate: Gate::Rz { qubit: q, angle: params[triple[2]] },
                        slot: Some(triple[2]),
                    });
                }
            }
            LayerSpec::Entangler(e) => match e.pattern {
                EntanglerPattern::RingCnot => {
                    if self.num_qubits >= 2 {
                        for q in 0..self.num_qubits {
                            out.push(ResolvedGate {
                                gate: Gate::Cnot { control: q, target: (q + 1) % self.num_qubits },
                                slot: None,
                            });
                        }
                    }
                }
                EntanglerPattern::FullCnot => {
                    for i in 0..self.num_qubits {
                        for j in (i + 1)..self.num_qubits {
                            out.push(ResolvedGate {
                                gate: Gate::Cnot { control: i, target: j },
                                slot: None,
                            });
                        }
                    }
                }
                EntanglerPattern::SymmetricZz => {
                    let slot = e.angle_slot.expect("validated at construction");
                    let angle = params[slot];
                    for i in 0..self.num_qubits {
                        for j in (i + 1)..self.num_qubits {
                            out.push(ResolvedGate {
                                gate: Gate::Zz { a: i, b: j, angle },
                                slot: Some(slot),
                            });
                        }
                    }
                }
            },
            LayerSpec::Measurement(_) => {}
        }
    }

    /// Resolves the full gate sequence for the given inputs, with slot
    /// provenance on every trainable gate.
    pub fn resolve_gates(&self, features: &[f64], params: &[f64]) -> Result<Vec<ResolvedGate>> {
        self.check_inputs(features, params)?;
        let mut gates = Vec::new();
        for layer in &self.layers {
            self.layer_gates(layer, features, params, &mut gates);
        }
        Ok(gates)
    }

    /// Evaluates the circuit: `z(x) = (⟨O_1⟩, ..., ⟨O_m⟩)` by exact simulation.
    pub fn evaluate(&self, features: &[f64], params: &[f64]) -> Result<LatentVector> {
        let gates = self.resolve_gates(features, params)?;
        run_gates(self.num_qubits, &gates, self.observables(), None)
    }

    /// Evaluates the circuit and returns the state after every layer,
    /// in layer order. Used by symmetry diagnostics.
    pub fn layer_states(&self, features: &[f64], params: &[f64]) -> Result<Vec<StateVector>> {
        self.check_inputs(features, params)?;
        let mut state = StateVector::zero(self.num_qubits)?;
        let mut states = Vec::with_capacity(self.layers.len());
        let mut gates = Vec::new();
        for layer in &self.layers {
            gates.clear();
            self.layer_gates(layer, features, params, &mut gates);
            for rg in &gates {
                state.apply_gate(&rg.gate)?;
            }
            states.push(state.clone());
        }
        Ok(states)
    }
}

/// Applies a resolved gate list to `|0...0⟩` and measures the observables.
///
/// `shift` optionally adds a phase offset to the angle of one gate occurrence
/// (by position in `gates`); this is the primitive behind the parameter-shift
/// rule, where a slot shared by several gates must be shifted one occurrence
/// at a time.
pub fn run_gates(
    num_qubits: usize,
    gates: &[ResolvedGate],
    observables: &[Observable],
    shift: Option<(usize, f64)>,
) -> Result<LatentVector> {
    let mut state = StateVector::zero(num_qubits)?;
    for (i, rg) in gates.iter().enumerate() {
        let gate = match shift {
            Some((occ, delta)) if occ == i => rg.gate.with_angle_shift(delta),
            _ => rg.gate,
        };
        state.apply_gate(&gate)?;
    }
    observables.iter().map(|o| state.expectation(o)).collect()
}

/// Builds a QSM circuit: per re-upload block, an encoding layer followed by
/// `num_layers` repetitions of (variational triple layer, entangler), then a
/// single measurement layer.
///
/// Parameter count is `num_reuploads × num_layers × num_qubits × 3`, plus one
/// angle per entangler layer when the pattern is `SymmetricZz`.
pub fn build_qsm(
    num_qubits: usize,
    num_layers: usize,
    num_reuploads: usize,
    entangler: Option<EntanglerPattern>,
    observables: Vec<Observable>,
) -> Result<CircuitSpec> {
    if num_qubits < 1 {
        return Err(Error::Configuration("build_qsm needs at least one qubit".into()));
    }
    if num_layers < 1 || num_reuploads < 1 {
        return Err(Error::Configuration(
            "build_qsm needs num_layers >= 1 and num_reuploads >= 1".into(),
        ));
    }
    if observables.is_empty() {
        return Err(Error::Configuration(
            "build_qsm needs at least one observable".into(),
        ));
    }

    let mut layers = Vec::new();
    let mut next_slot = 0;
    for _ in 0..num_reuploads {
        layers.push(LayerSpec::Encoding(EncodingMap::PerQubit));
        for _ in 0..num_layers {
            let triples: Vec<[usize; 3]> = (0..num_qubits)
                .map(|_| {
                    let t = [next_slot, next_slot + 1, next_slot + 2];
                    next_slot += 3;
                    t
                })
                .collect();
            layers.push(LayerSpec::Variational(VariationalLayer::PerQubit {
                slots: triples,
            }));
            if let Some(pattern) = entangler {
                let angle_slot = if pattern == EntanglerPattern::SymmetricZz {
                    let s = next_slot;
                    next_slot += 1;
                    Some(s)
                } else {
                    None
                };
                layers.push(LayerSpec::Entangler(EntanglerLayer { pattern, angle_slot }));
            }
        }
    }
    layers.push(LayerSpec::Measurement(observables));
    CircuitSpec::from_layers(num_qubits, layers, num_reuploads)
}

/// Builds the permutation-symmetric two-qubit regressor.
///
/// Every operation treats the two qubits identically: each re-upload block
/// encodes one feature (blocks cycle through features round-robin) as the
/// same RY on both qubits, each symmetric block applies one shared rotation
/// triple to both qubits followed by a trainable ZZ coupling, and the
/// measurement is `(Z_0 + Z_1)/2`. The state therefore never leaves the
/// three-dimensional symmetric subspace.
///
/// Parameter count is `num_reuploads × num_blocks × 4`.
pub fn build_su_symmetric(
    num_features: usize,
    num_reuploads: usize,
    num_blocks: usize,
) -> Result<CircuitSpec> {
    if num_features < 1 {
        return Err(Error::Configuration(
            "build_su_symmetric needs at least one feature".into(),
        ));
    }
    if num_reuploads < 1 {
        return Err(Error::Configuration(
            "build_su_symmetric needs num_reuploads >= 1".into(),
        ));
    }

    let mut layers = Vec::new();
    let mut next_slot = 0;
    for block in 0..num_reuploads {
        layers.push(LayerSpec::Encoding(EncodingMap::Broadcast {
            feature: block % num_features,
        }));
        for _ in 0..num_blocks {
            layers.push(LayerSpec::Variational(VariationalLayer::Shared {
                slots: [next_slot, next_slot + 1, next_slot + 2],
            }));
            layers.push(LayerSpec::Entangler(EntanglerLayer {
                pattern: EntanglerPattern::SymmetricZz,
                angle_slot: Some(next_slot + 3),
            }));
            next_slot += 4;
        }
    }
    layers.push(LayerSpec::Measurement(vec![Observable::mean_z(2)]));
    CircuitSpec::from_layers(2, layers, num_reuploads)
}
