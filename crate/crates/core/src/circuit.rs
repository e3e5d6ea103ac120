//! Quantum circuit IR: controlled single-qubit gates over input wires plus
//! ancilla wires, with size/depth metrics and a JSON wire format.
//!
//! Circuit size is the number of gates plus the number of wires.  A gate
//! may carry any number of controls natively; an optional lowered count
//! prices a `k`-controlled gate at `2k - 1`.

use crate::ast::GateName;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Partial map from wire index to required polarity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ControlStructure(BTreeMap<u32, bool>);

impl ControlStructure {
    pub fn empty() -> Self {
        ControlStructure(BTreeMap::new())
    }

    pub fn single(wire: u32, polarity: bool) -> Self {
        let mut m = BTreeMap::new();
        m.insert(wire, polarity);
        ControlStructure(m)
    }

    /// `cs[wire := polarity]`.
    pub fn with(&self, wire: u32, polarity: bool) -> Self {
        let mut m = self.0.clone();
        m.insert(wire, polarity);
        ControlStructure(m)
    }

    pub fn get(&self, wire: u32) -> Option<bool> {
        self.0.get(&wire).copied()
    }

    pub fn contains(&self, wire: u32) -> bool {
        self.0.contains_key(&wire)
    }

    pub fn remove(&self, wire: u32) -> Self {
        let mut m = self.0.clone();
        m.remove(&wire);
        ControlStructure(m)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.0.iter().map(|(w, p)| (*w, *p))
    }

    pub fn wires(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.keys().copied()
    }

    /// Two control structures are orthogonal when some common wire is
    /// required with opposite polarities.
    pub fn orthogonal(&self, other: &ControlStructure) -> bool {
        self.iter()
            .any(|(w, p)| other.get(w).is_some_and(|q| q != p))
    }

    /// Union of two structures; `None` when they disagree on a wire
    /// (the conjunction is unsatisfiable).
    pub fn union(&self, other: &ControlStructure) -> Option<ControlStructure> {
        let mut m = self.0.clone();
        for (w, p) in other.iter() {
            match m.insert(w, p) {
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(ControlStructure(m))
    }

    /// Whether basis-state `key` (bit `w - 1` holds wire `w`) satisfies
    /// every control.
    pub fn matches_key(&self, key: u128) -> bool {
        self.iter().all(|(w, p)| (key >> (w - 1)) & 1 == u128::from(p))
    }
}

impl FromIterator<(u32, bool)> for ControlStructure {
    fn from_iter<T: IntoIterator<Item = (u32, bool)>>(iter: T) -> Self {
        ControlStructure(iter.into_iter().collect())
    }
}

/// One controlled single-qubit gate.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateName,
    /// Angle in `[0, 2*pi)`; present exactly for RY and PH.
    pub theta: Option<f64>,
    pub target: u32,
    pub controls: ControlStructure,
}

impl Gate {
    pub fn new(kind: GateName, theta: Option<f64>, target: u32, controls: ControlStructure) -> Gate {
        assert!(
            !controls.contains(target),
            "gate target {target} appears in its own controls"
        );
        debug_assert_eq!(theta.is_some(), kind.takes_phase());
        Gate {
            kind,
            theta,
            target,
            controls,
        }
    }

    pub fn not(target: u32, controls: ControlStructure) -> Gate {
        Gate::new(GateName::Not, None, target, controls)
    }

    pub fn unitary(&self) -> [[Complex64; 2]; 2] {
        gate_matrix(self.kind, self.theta)
    }

    /// Wires the gate acts or depends on.
    pub fn wires(&self) -> impl Iterator<Item = u32> + '_ {
        std::iter::once(self.target).chain(self.controls.wires())
    }
}

/// The 2x2 unitary of a basic gate.
pub fn gate_matrix(kind: GateName, theta: Option<f64>) -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    match kind {
        GateName::Not => [[z, one], [one, z]],
        GateName::H => {
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        GateName::Ph => {
            let t = theta.expect("PH needs an angle");
            [[one, z], [z, Complex64::from_polar(1.0, t)]]
        }
        GateName::Ry => {
            let t = theta.expect("RY needs an angle") / 2.0;
            let (s, c) = t.sin_cos();
            [
                [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
            ]
        }
    }
}

/// An ancilla wire created by anchoring a `(procedure, size)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorInfo {
    pub wire: u32,
    pub proc: String,
    pub size: usize,
}

/// A circuit over `wires` input wires and `ancillas` helper wires
/// (indices `wires + 1 ..= wires + ancillas`).  Ancillas start in `|0>`
/// and are restored to `|0>` by well-formed circuits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub wires: usize,
    pub ancillas: usize,
    pub anchors: Vec<AnchorInfo>,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(wires: usize) -> Circuit {
        Circuit {
            wires,
            ancillas: 0,
            anchors: Vec::new(),
            gates: Vec::new(),
        }
    }

    pub fn total_wires(&self) -> usize {
        self.wires + self.ancillas
    }

    /// Size: number of gates plus number of wires.
    pub fn size(&self) -> usize {
        self.gates.len() + self.total_wires()
    }

    /// Critical-path depth; gates share a layer iff their wire sets
    /// (target plus controls) are disjoint.
    pub fn depth(&self) -> usize {
        let mut last = vec![0usize; self.total_wires() + 1];
        let mut depth = 0;
        for g in &self.gates {
            let layer = 1 + g.wires().map(|w| last[w as usize]).max().unwrap_or(0);
            for w in g.wires() {
                last[w as usize] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    /// Gate count after pricing each k-controlled gate at `2k - 1`
    /// (`k >= 1`), plus wires.
    pub fn lowered_size(&self) -> usize {
        let lowered_gates: usize = self
            .gates
            .iter()
            .map(|g| {
                let k = g.controls.len();
                if k == 0 {
                    1
                } else {
                    2 * k - 1
                }
            })
            .sum();
        lowered_gates + self.total_wires()
    }

    pub fn push(&mut self, gate: Gate) {
        debug_assert!(gate.wires().all(|w| w >= 1 && w as usize <= self.total_wires()));
        self.gates.push(gate);
    }
}

// --- JSON wire format ------------------------------------------------------

#[derive(Debug, Error)]
pub enum CircuitJsonError {
    #[error("invalid circuit JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("gate {index}: {msg}")]
    BadGate { index: usize, msg: String },
    #[error("anchor wire {wire} is not an ancilla wire")]
    BadAnchor { wire: u32 },
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    wires: usize,
    ancillas: usize,
    anchors: Vec<AnchorInfo>,
    gates: Vec<GateJson>,
}

#[derive(Serialize, Deserialize)]
struct GateJson {
    g: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    t: u32,
    c: Vec<(u32, u8)>,
}

/// serde_json formatter that prints every float with 17 significant
/// digits so angles survive the round trip bit-exactly.
struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

pub fn serialize(c: &Circuit) -> String {
    let doc = CircuitJson {
        wires: c.wires,
        ancillas: c.ancillas,
        anchors: c.anchors.clone(),
        gates: c
            .gates
            .iter()
            .map(|g| GateJson {
                g: g.kind.as_str().to_string(),
                theta: g.theta,
                t: g.target,
                c: g.controls.iter().map(|(w, p)| (w, u8::from(p))).collect(),
            })
            .collect(),
    };
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits);
    doc.serialize(&mut ser).expect("circuit serialization");
    String::from_utf8(out).expect("serializer emits UTF-8")
}

pub fn deserialize(text: &str) -> Result<Circuit, CircuitJsonError> {
    let doc: CircuitJson = serde_json::from_str(text)?;
    let total = doc.wires + doc.ancillas;
    for a in &doc.anchors {
        if (a.wire as usize) <= doc.wires || (a.wire as usize) > total {
            return Err(CircuitJsonError::BadAnchor { wire: a.wire });
        }
    }
    let mut gates = Vec::with_capacity(doc.gates.len());
    for (index, g) in doc.gates.iter().enumerate() {
        let bad = |msg: String| CircuitJsonError::BadGate { index, msg };
        let kind = GateName::parse(&g.g)
            .ok_or_else(|| bad(format!("unknown gate `{}`", g.g)))?;
        if kind.takes_phase() != g.theta.is_some() {
            return Err(bad(format!(
                "gate `{}` {} an angle",
                g.g,
                if kind.takes_phase() {
                    "requires"
                } else {
                    "does not take"
                }
            )));
        }
        if let Some(t) = g.theta {
            if !t.is_finite() {
                return Err(bad("angle must be finite".into()));
            }
        }
        if g.t < 1 || g.t as usize > total {
            return Err(bad(format!("target wire {} out of range", g.t)));
        }
        let mut controls = ControlStructure::empty();
        for &(w, p) in &g.c {
            if w < 1 || w as usize > total {
                return Err(bad(format!("control wire {w} out of range")));
            }
            if p > 1 {
                return Err(bad(format!("control polarity {p} must be 0 or 1")));
            }
            if w == g.t {
                return Err(bad(format!("target wire {w} appears in its own controls")));
            }
            if controls.contains(w) {
                return Err(bad(format!("control wire {w} listed twice")));
            }
            controls = controls.with(w, p == 1);
        }
        gates.push(Gate {
            kind,
            theta: g.theta,
            target: g.t,
            controls,
        });
    }
    Ok(Circuit {
        wires: doc.wires,
        ancillas: doc.ancillas,
        anchors: doc.anchors,
        gates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices_match_definitions() {
        let x = gate_matrix(GateName::Not, None);
        assert_eq!(x[0][1], Complex64::new(1.0, 0.0));
        assert_eq!(x[0][0], Complex64::new(0.0, 0.0));
        // PH at pi/2 is the S gate
        let s = gate_matrix(GateName::Ph, Some(std::f64::consts::FRAC_PI_2));
        assert!((s[1][1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        // PH at 0 is the identity
        let id = gate_matrix(GateName::Ph, Some(0.0));
        assert!((id[1][1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn size_and_depth_basics() {
        let mut c = Circuit::new(3);
        assert_eq!(c.size(), 3);
        assert_eq!(c.depth(), 0);
        c.push(Gate::not(1, ControlStructure::empty()));
        c.push(Gate::not(2, ControlStructure::empty()));
        assert_eq!(c.depth(), 1); // disjoint wires share a layer
        c.push(Gate::not(2, ControlStructure::single(1, true)));
        assert_eq!(c.depth(), 2);
        assert_eq!(c.size(), 6);
    }

    #[test]
    fn empty_circuit_serializes_compactly() {
        let c = Circuit::new(4);
        assert_eq!(
            serialize(&c),
            r#"{"wires":4,"ancillas":0,"anchors":[],"gates":[]}"#
        );
    }

    #[test]
    fn deserialize_rejects_target_in_controls() {
        let text = r#"{"wires":2,"ancillas":0,"anchors":[],"gates":[{"g":"NOT","t":1,"c":[[1,1]]}]}"#;
        assert!(matches!(
            deserialize(text),
            Err(CircuitJsonError::BadGate { .. })
        ));
    }

    #[test]
    fn angles_roundtrip_bit_exactly() {
        let mut c = Circuit::new(1);
        c.push(Gate::new(
            GateName::Ph,
            Some(std::f64::consts::PI / 3.0),
            1,
            ControlStructure::empty(),
        ));
        let back = deserialize(&serialize(&c)).unwrap();
        assert_eq!(back.gates[0].theta.unwrap().to_bits(), c.gates[0].theta.unwrap().to_bits());
        assert_eq!(back, c);
    }
}
