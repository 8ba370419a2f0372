//! JSON file formats for fans, collections and automorphism groups.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toric_core::symmetry::{FanAutGroup, FanAutomorphism};
use toric_core::{Collection, Fan, PicardLattice, TDivisor};

use crate::ToolError;

/// `{"rank": n, "rays": [[..]], "max_cones": [[..]]}` with 0-based ray indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanJson {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl FanJson {
    pub fn from_fan(fan: &Fan) -> Self {
        FanJson { rank: fan.rank(), rays: fan.rays().to_vec(), max_cones: fan.max_cones().to_vec() }
    }

    /// Validates and builds the fan.
    pub fn into_fan(self) -> Result<Fan, ToolError> {
        Ok(Fan::checked(self.rank, self.rays, self.max_cones)?)
    }
}

/// `{"divisors": [[a_ρ..]..], "blocks": [end..]}`; `blocks` is optional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollectionJson {
    pub divisors: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<usize>>,
}

impl CollectionJson {
    pub fn from_divisors(divisors: &[TDivisor], blocks: Option<Vec<usize>>) -> Self {
        CollectionJson { divisors: divisors.iter().map(|d| d.coeffs().to_vec()).collect(), blocks }
    }

    pub fn to_collection(&self, lat: &PicardLattice) -> Result<Collection, ToolError> {
        let items = self
            .divisors
            .iter()
            .map(|d| lat.class_of(&TDivisor::new(d.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(match &self.blocks {
            Some(b) => Collection::with_blocks(items, b.clone())?,
            None => Collection::new(items)?,
        })
    }
}

/// Group report: order, abelianness, sorted element orders, and each
/// element as a ray permutation (`ray_permutations[g][ρ]` is the image of ρ)
/// together with its matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    #[serde(default)]
    pub abelian: bool,
    #[serde(default)]
    pub element_orders: Vec<usize>,
    pub ray_permutations: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matrices: Vec<Vec<Vec<i64>>>,
}

impl GroupJson {
    pub fn from_group(group: &FanAutGroup) -> Self {
        let s = group.summary();
        GroupJson {
            order: s.order,
            abelian: s.abelian,
            element_orders: s.element_orders,
            ray_permutations: group.elements().iter().map(|g| g.ray_perm.clone()).collect(),
            matrices: group.elements().iter().map(|g| toric_core::symmetry::matrix_to_i64(&g.matrix)).collect(),
        }
    }

    /// Rebuilds the group on `fan` from the ray permutations; the summary
    /// fields are ignored and recomputed.
    pub fn into_group(self, fan: &Fan) -> Result<FanAutGroup, ToolError> {
        let elements = self
            .ray_permutations
            .into_iter()
            .enumerate()
            .map(|(k, p)| {
                FanAutomorphism::from_ray_perm(fan, p)
                    .ok_or_else(|| ToolError::Input(format!("element {k} is not an automorphism of the fan")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FanAutGroup::from_elements(elements)?)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ToolError> {
    let text = fs::read_to_string(path).map_err(|source| ToolError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| ToolError::Json { path: path.into(), source })
}

/// Compact single-line JSON followed by a newline.
pub fn to_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use toric_core::catalog;

    #[test]
    fn fan_round_trip_is_exact() {
        for fan in [catalog::projective_space(3), catalog::dp6(), catalog::v_fano(4).unwrap().fan] {
            let text = to_line(&FanJson::from_fan(&fan));
            let parsed: FanJson = serde_json::from_str(&text).unwrap();
            let back = parsed.into_fan().unwrap();
            assert_eq!(back, fan);
            assert_eq!(to_line(&FanJson::from_fan(&back)), text);
        }
    }

    #[test]
    fn p1_layout() {
        let text = to_line(&FanJson::from_fan(&catalog::projective_space(1)));
        assert_eq!(text, "{\"rank\":1,\"rays\":[[-1],[1]],\"max_cones\":[[0],[1]]}\n");
    }

    #[test]
    fn invalid_fans_are_rejected() {
        let j = FanJson { rank: 1, rays: vec![vec![2], vec![-1]], max_cones: vec![vec![0], vec![1]] };
        assert!(j.into_fan().is_err());
        assert!(serde_json::from_str::<FanJson>("{\"rank\":1,\"rays\":[[1]],\"max_cones\":[[0]],\"x\":1}").is_err());
    }

    #[test]
    fn group_round_trip() {
        let fan = catalog::dp6();
        let g = toric_core::fan_automorphisms(&fan);
        let j = GroupJson::from_group(&g);
        assert_eq!(j.order, 12);
        assert!(!j.abelian);
        let back = j.clone().into_group(&fan).unwrap();
        assert_eq!(back, g);
        let mut partial = j;
        partial.ray_permutations.truncate(3);
        assert!(partial.into_group(&fan).is_err());
    }

    #[test]
    fn collection_blocks_are_optional() {
        let c: CollectionJson = serde_json::from_str("{\"divisors\":[[0,0,0],[1,0,0]]}").unwrap();
        assert_eq!(c.blocks, None);
        assert_eq!(to_line(&c), "{\"divisors\":[[0,0,0],[1,0,0]]}\n");
    }
}
