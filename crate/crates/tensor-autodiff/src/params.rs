use std::collections::BTreeMap;

use container::{Reader, Writer};

use crate::{Tape, Tensor, TensorError};

/// Which network a parameter set belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamRole {
    Generator,
    Discriminator,
    Reward,
}

impl ParamRole {
    fn to_u8(self) -> u8 {
        match self {
            ParamRole::Generator => 0,
            ParamRole::Discriminator => 1,
            ParamRole::Reward => 2,
        }
    }

    fn from_u8(v: u8) -> Option<Self> {
        match v {
            0 => Some(ParamRole::Generator),
            1 => Some(ParamRole::Discriminator),
            2 => Some(ParamRole::Reward),
            _ => None,
        }
    }
}

/// Named collection of parameter tensors for one network.
///
/// Entries are untracked master values; [`ParamSet::bind`] produces the
/// per-tape differentiable view used during a training step. Names and
/// shapes are fixed after initialization.
#[derive(Clone)]
pub struct ParamSet {
    role: ParamRole,
    entries: BTreeMap<String, Tensor>,
}

impl ParamSet {
    pub fn new(role: ParamRole) -> Self {
        Self {
            role,
            entries: BTreeMap::new(),
        }
    }

    pub fn role(&self) -> ParamRole {
        self.role
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Registers a new parameter; names must be unique.
    pub fn insert(&mut self, name: &str, value: Tensor) {
        assert!(
            self.entries.insert(name.to_string(), value.detach()).is_none(),
            "duplicate parameter name {name}"
        );
    }

    pub fn get(&self, name: &str) -> Option<&Tensor> {
        self.entries.get(name)
    }

    /// Replaces the value of an existing parameter; the shape is fixed.
    pub fn set(&mut self, name: &str, value: Tensor) -> Result<(), TensorError> {
        let slot = self
            .entries
            .get_mut(name)
            .ok_or_else(|| TensorError::UnknownParam(name.to_string()))?;
        if slot.shape() != value.shape() {
            return Err(TensorError::ParamShape {
                name: name.to_string(),
                expected: slot.shape().to_vec(),
                found: value.shape().to_vec(),
            });
        }
        *slot = value.detach();
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Tensor)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Differentiable view: every entry becomes a leaf on `tape`.
    pub fn bind(&self, tape: &Tape) -> Params {
        let map = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), tape.leaf(v)))
            .collect();
        Params { map }
    }

    /// Constant view for evaluation or for the frozen side of a loss.
    pub fn as_const(&self) -> Params {
        let map = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Params { map }
    }

    /// True when every entry is bitwise identical to `other`'s.
    pub fn bitwise_eq(&self, other: &ParamSet) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.iter().zip(other.entries.iter()).all(
                |((ka, va), (kb, vb))| {
                    ka == kb
                        && va.shape() == vb.shape()
                        && va
                            .data()
                            .iter()
                            .zip(vb.data())
                            .all(|(x, y)| x.to_bits() == y.to_bits())
                },
            )
    }

    pub fn encode_into(&self, w: &mut Writer) {
        w.u8(self.role.to_u8());
        w.u32(self.entries.len() as u32);
        for (name, tensor) in &self.entries {
            w.string(name);
            w.u32(tensor.rank() as u32);
            for &d in tensor.shape() {
                w.u32(d as u32);
            }
            for &v in tensor.data() {
                w.f64(v);
            }
        }
    }

    pub fn decode_from(r: &mut Reader) -> Result<Self, TensorError> {
        let role = ParamRole::from_u8(r.u8()?).ok_or_else(|| {
            TensorError::UnknownParam("bad role byte in checkpoint".to_string())
        })?;
        let count = r.u32()? as usize;
        let mut set = ParamSet::new(role);
        for _ in 0..count {
            let name = r.string()?;
            let rank = r.u32()? as usize;
            let mut shape = Vec::with_capacity(rank);
            for _ in 0..rank {
                shape.push(r.u32()? as usize);
            }
            let len: usize = shape.iter().product();
            let mut data = Vec::with_capacity(len);
            for _ in 0..len {
                data.push(r.f64()?);
            }
            set.insert(&name, Tensor::from_vec(shape, data)?);
        }
        Ok(set)
    }
}

/// Name-keyed view of one network's parameters as (possibly tracked)
/// tensors; what the forward functions consume.
pub struct Params {
    map: BTreeMap<String, Tensor>,
}

impl Params {
    pub fn get(&self, name: &str) -> Result<&Tensor, TensorError> {
        self.map
            .get(name)
            .ok_or_else(|| TensorError::MissingParam(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Tensor)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }
}
