use std::fmt;

use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Non-negative fraction kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<u64>);

impl Rational {
    /// `num / den` reduced. Panics on a zero denominator.
    pub fn new(num: u64, den: u64) -> Self {
        Rational(Ratio::new(num, den))
    }

    pub fn num(&self) -> u64 {
        *self.0.numer()
    }

    pub fn den(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.num() as f64 / self.den() as f64
    }
}

/// Always `a/b`, even for whole numbers.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num(), self.den())
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &self.num())?;
        st.serialize_field("den", &self.den())?;
        st.end()
    }
}
