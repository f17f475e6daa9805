use crate::error::{Error, Result};

use super::Poset;

/// A proper order ideal of a poset with least element: downward closed,
/// contains the least element, and excludes the greatest element (if any).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    members: Vec<usize>,
}

impl Ideal {
    pub fn new(poset: &Poset, members: &[usize]) -> Result<Self> {
        poset.check_all(members)?;
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();

        let zero = poset.least().ok_or(Error::NoLeastElement)?;
        if !poset.is_ideal(&members)? {
            return Err(Error::InvalidIdeal("not downward closed".into()));
        }
        if members.binary_search(&zero).is_err() {
            return Err(Error::InvalidIdeal(format!(
                "least element `{}` missing",
                poset.label(zero)
            )));
        }
        if let Some(one) = poset.greatest() {
            if members.binary_search(&one).is_ok() {
                return Err(Error::InvalidIdeal(format!(
                    "contains the greatest element `{}`",
                    poset.label(one)
                )));
            }
        }
        if members.len() == poset.len() {
            return Err(Error::InvalidIdeal("ideal is not proper".into()));
        }
        Ok(Ideal { members })
    }

    pub fn from_labels<S: AsRef<str>>(poset: &Poset, labels: &[S]) -> Result<Self> {
        Ideal::new(poset, &poset.indices_of(labels)?)
    }

    /// Members in ascending index order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let b3 = Poset::boolean_lattice(3).unwrap();
        let ok = Ideal::from_labels(&b3, &["{}", "{1}", "{2}"]).unwrap();
        assert_eq!(ok.len(), 3);
        assert!(ok.contains(b3.index_of("{2}").unwrap()));

        assert!(Ideal::from_labels(&b3, &["{}"]).is_ok());
        assert!(matches!(
            Ideal::from_labels(&b3, &["{1}"]),
            Err(Error::InvalidIdeal(_))
        ));
        assert!(matches!(
            Ideal::from_labels::<&str>(&b3, &[]),
            Err(Error::InvalidIdeal(_))
        ));
        let antichain = Poset::antichain(&["x", "y"]).unwrap();
        assert_eq!(
            Ideal::from_labels(&antichain, &["x"]).unwrap_err(),
            Error::NoLeastElement
        );
    }
}
