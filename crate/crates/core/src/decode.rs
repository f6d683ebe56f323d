//! Noiseless outcome simulation and the two decoders.
//!
//! [`decode_vertices`] classifies every item as defective, clear or unknown
//! from the test outcomes. [`decode_edges`] lifts that classification to the
//! hypergraph's edges and uses positive tests whose remaining suspects all lie
//! in one edge to promote that edge.
//!
//! Statuses serialize as the numbers `0`, `0.5` and `1`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::binmat::BinaryMatrix;
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Clear,
    Unknown,
    Defective,
}

impl Status {
    pub fn value(self) -> f64 {
        match self {
            Status::Clear => 0.0,
            Status::Unknown => 0.5,
            Status::Defective => 1.0,
        }
    }

    pub fn from_value(v: f64) -> Option<Status> {
        match v {
            0.0 => Some(Status::Clear),
            0.5 => Some(Status::Unknown),
            1.0 => Some(Status::Defective),
            _ => None,
        }
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Status::Clear => s.serialize_u8(0),
            Status::Unknown => s.serialize_f64(0.5),
            Status::Defective => s.serialize_u8(1),
        }
    }
}

impl<'de> Deserialize<'de> for Status {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        Status::from_value(v).ok_or_else(|| serde::de::Error::custom(format!("status must be 0, 0.5 or 1, got {v}")))
    }
}

/// One boolean per test, `true` for a positive pool.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OutcomeVector(pub Vec<bool>);

impl OutcomeVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// A string of `0`/`1` characters; surrounding whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => {
                    Err(Error::Parse { line: 1, msg: format!("character {} is {other:?}, expected 0 or 1", i + 1) })
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(OutcomeVector)
    }

    pub fn to_text(&self) -> String {
        let mut s: String = self.0.iter().map(|&b| if b { '1' } else { '0' }).collect();
        s.push('\n');
        s
    }
}

/// One status per item (decoded vertices) or per edge (decoded edges).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StatusVector(pub Vec<Status>);

impl StatusVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// No entry is [`Status::Unknown`].
    pub fn is_boolean(&self) -> bool {
        self.0.iter().all(|&s| s != Status::Unknown)
    }

    pub fn indices_with(&self, status: Status) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &s)| s == status).map(|(i, _)| i).collect()
    }
}

/// Test `i` is positive iff row `i` pools some defective item.
pub fn simulate_outcomes(m: &BinaryMatrix, defectives: &[usize]) -> Result<OutcomeVector> {
    let mut y = Bits::zeros(m.rows());
    for &v in defectives {
        if v >= m.cols() {
            return Err(Error::InvalidParameter(format!("defective item {v} outside 0..{}", m.cols())));
        }
        y.or_assign(m.column(v));
    }
    Ok(OutcomeVector((0..m.rows()).map(|i| y.get(i)).collect()))
}

fn check_len(m: &BinaryMatrix, y: &OutcomeVector) -> Result<()> {
    if y.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!("{} outcomes for {} tests", y.len(), m.rows())));
    }
    Ok(())
}

/// Item statuses from outcomes.
///
/// Every item in a negative test is clear. A surviving item is defective when
/// some test holds it together with clear items only, and unknown otherwise.
/// Under noiseless outcomes a surviving item sits only in positive tests, so
/// the second pass needs no look at `y`.
pub fn decode_vertices(m: &BinaryMatrix, y: &OutcomeVector) -> Result<StatusVector> {
    check_len(m, y)?;
    let mut alive = Bits::ones(m.cols());
    for (i, &positive) in y.0.iter().enumerate() {
        if !positive {
            for (a, r) in alive.words_mut().iter_mut().zip(m.row_words(i)) {
                *a &= !r;
            }
        }
    }
    let mut x = vec![Status::Clear; m.cols()];
    for j in alive.iter_ones() {
        x[j] = Status::Unknown;
    }
    // rows whose only surviving item is j prove j defective
    for i in 0..m.rows() {
        let mut sole = None;
        let mut count = 0;
        for (w, (&r, &a)) in m.row_words(i).iter().zip(alive.words()).enumerate() {
            let both = r & a;
            if both != 0 {
                count += both.count_ones();
                sole = Some(w * 64 + both.trailing_zeros() as usize);
                if count > 1 {
                    break;
                }
            }
        }
        if count == 1 {
            x[sole.expect("one survivor")] = Status::Defective;
        }
    }
    Ok(StatusVector(x))
}

/// Edge statuses from item statuses and outcomes.
///
/// An edge holding a defective item is defective, else unknown when it holds
/// an unknown item, else clear. Then, for each positive test, the items it
/// pools that are not clear form a set `E`; every unknown edge containing `E`
/// becomes defective.
pub fn decode_edges(h: &Hypergraph, m: &BinaryMatrix, y: &OutcomeVector, x: &StatusVector) -> Result<StatusVector> {
    check_len(m, y)?;
    if m.cols() != h.n() || x.len() != h.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} columns and {} statuses for {} vertices",
            m.cols(),
            x.len(),
            h.n()
        )));
    }
    let mut z: Vec<Status> = h
        .edges()
        .iter()
        .map(|e| {
            let mut s = Status::Clear;
            for &v in e {
                match x.0[v] {
                    Status::Defective => return Status::Defective,
                    Status::Unknown => s = Status::Unknown,
                    Status::Clear => {}
                }
            }
            s
        })
        .collect();
    let mut not_clear = Bits::zeros(h.n());
    for (v, &s) in x.0.iter().enumerate() {
        if s != Status::Clear {
            not_clear.set(v, true);
        }
    }
    let edge_bits: Vec<Bits> = (0..h.m()).map(|s| h.edge_bits(s)).collect();
    for (i, &positive) in y.0.iter().enumerate() {
        if !positive {
            continue;
        }
        let mut e = m.row(i);
        e.and_assign(&not_clear);
        for (s, zs) in z.iter_mut().enumerate() {
            if *zs == Status::Unknown && e.is_subset(&edge_bits[s]) {
                *zs = Status::Defective;
            }
        }
    }
    Ok(StatusVector(z))
}
