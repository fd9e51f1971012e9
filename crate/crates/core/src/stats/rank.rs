use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Smallest value gets rank 1.
    Minimise,
    Maximise,
}

/// 1-based ranks; tied values share the average of the ranks they span.
pub fn average_ranks(values: &[f64], direction: Direction) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| match direction {
        Direction::Minimise => values[a].total_cmp(&values[b]),
        Direction::Maximise => values[b].total_cmp(&values[a]),
    });
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    /// `per_case[c][a]`: rank of algorithm `a` in case `c`.
    pub per_case: Vec<Vec<f64>>,
    pub average: Vec<f64>,
    /// Rank of the average ranks (lower average is better).
    pub overall: Vec<f64>,
}

/// Ranks algorithms within each case, then overall by average rank.
/// `values[c][a]` is algorithm `a`'s summary value in case `c`.
pub fn rank_table(values: &[Vec<Option<f64>>], direction: Direction) -> Result<RankTable> {
    if values.is_empty() {
        return Err(Error::EmptyInput("rank table"));
    }
    let width = values[0].len();
    if width == 0 {
        return Err(Error::EmptyInput("rank table row"));
    }
    let mut per_case = Vec::with_capacity(values.len());
    for (c, row) in values.iter().enumerate() {
        if row.len() != width {
            return Err(Error::ShapeMismatch { left: format!("{width} algorithms"), right: format!("{} in case {c}", row.len()) });
        }
        let vals = row
            .iter()
            .enumerate()
            .map(|(a, v)| match v {
                Some(x) if x.is_finite() => Ok(*x),
                _ => Err(Error::InvalidConfig(format!("missing or non-finite cell (case {c}, algorithm {a})"))),
            })
            .collect::<Result<Vec<f64>>>()?;
        per_case.push(average_ranks(&vals, direction));
    }
    let average: Vec<f64> = (0..width)
        .map(|a| per_case.iter().map(|r| r[a]).sum::<f64>() / per_case.len() as f64)
        .collect();
    let overall = average_ranks(&average, Direction::Minimise);
    Ok(RankTable { per_case, average, overall })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_ranks_on_ties() {
        assert_eq!(average_ranks(&[0.52, 0.54, 0.54, 0.58], Direction::Minimise), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(average_ranks(&[0.52, 0.54, 0.54], Direction::Minimise), vec![1.0, 2.5, 2.5]);
        assert_eq!(average_ranks(&[1.0, 3.0, 2.0], Direction::Maximise), vec![3.0, 1.0, 2.0]);
    }

    #[test]
    fn all_equal() {
        assert_eq!(average_ranks(&[7.0; 5], Direction::Minimise), vec![3.0; 5]);
    }

    #[test]
    fn table_and_missing_cells() {
        let v = vec![vec![Some(0.1), Some(0.2), Some(0.3)], vec![Some(0.3), Some(0.2), Some(0.1)]];
        let t = rank_table(&v, Direction::Minimise).unwrap();
        assert_eq!(t.average, vec![2.0, 2.0, 2.0]);
        assert_eq!(t.overall, vec![2.0, 2.0, 2.0]);
        let bad = vec![vec![Some(0.1), None]];
        assert!(rank_table(&bad, Direction::Minimise).is_err());
    }
}
