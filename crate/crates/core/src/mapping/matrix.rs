use crate::error::{Error, Result};
use crate::frames::{Frame, Subset};

/// Source elements × distinct image subsets, zero columns removed.
///
/// Columns are the distinct image subsets in canonical subset order (size,
/// then frame element order).
#[derive(Debug, Clone, PartialEq)]
pub struct BasicMatrix {
    source: Frame,
    target: Frame,
    columns: Vec<Subset>,
    rows: Vec<Vec<f64>>,
    row_unions: Vec<Subset>,
}

/// One row of the complete matrix: the image of a nonempty source subset.
#[derive(Debug, Clone, PartialEq)]
pub struct CemRow {
    pub title: Subset,
    /// Nonzero entries; basic-matrix columns first, in matrix order, then
    /// the union column when it is not a basic-matrix column.
    pub entries: Vec<(Subset, f64)>,
    /// Union of the member rows' images, for multi-element titles.
    pub union_column: Option<Subset>,
    /// Mass moved to `union_column` from columns where some member row is zero.
    pub diverted: f64,
}

impl CemRow {
    pub fn mass_of(&self, column: &Subset) -> f64 {
        self.entries
            .iter()
            .find(|(s, _)| s == column)
            .map_or(0.0, |(_, m)| *m)
    }

    /// The averaged part of an entry, without diverted mass.
    pub fn averaged(&self, column: &Subset) -> f64 {
        let m = self.mass_of(column);
        if self.union_column.as_ref() == Some(column) {
            m - self.diverted
        } else {
            m
        }
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }
}

impl BasicMatrix {
    pub(super) fn build(source: &Frame, target: &Frame, images: &[Vec<(Subset, f64)>]) -> Self {
        let mut columns: Vec<Subset> = Vec::new();
        for image in images {
            for (subset, _) in image {
                if !columns.contains(subset) {
                    columns.push(subset.clone());
                }
            }
        }
        columns.sort();
        let rows = images
            .iter()
            .map(|image| {
                let mut row = vec![0.0; columns.len()];
                for (subset, mass) in image {
                    let j = columns
                        .iter()
                        .position(|c| c == subset)
                        .expect("column collected above");
                    row[j] = *mass;
                }
                row
            })
            .collect();
        let row_unions = images
            .iter()
            .map(|image| {
                let mask = image.iter().fold(0, |acc, (s, _)| acc | s.mask());
                Subset::from_mask(target, mask)
            })
            .collect();
        BasicMatrix {
            source: source.clone(),
            target: target.clone(),
            columns,
            rows,
            row_unions,
        }
    }

    pub fn source(&self) -> &Frame {
        &self.source
    }

    pub fn target(&self) -> &Frame {
        &self.target
    }

    /// Column titles.
    pub fn columns(&self) -> &[Subset] {
        &self.columns
    }

    pub fn column_index(&self, title: &Subset) -> Option<usize> {
        self.columns.iter().position(|c| c == title)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn entry(&self, row: usize, column: usize) -> f64 {
        self.rows[row][column]
    }

    pub fn row_union(&self, row: usize) -> &Subset {
        &self.row_unions[row]
    }

    pub(super) fn is_zero_one(&self) -> bool {
        self.rows.iter().flatten().all(|&v| v == 0.0 || v == 1.0)
    }

    /// Complete-matrix row for a nonempty source subset.
    ///
    /// A singleton title returns its basic-matrix row. For a title with `k`
    /// members, column `j` keeps `(Σ member entries)/k` when every member
    /// entry is nonzero; otherwise that average goes to the union of the
    /// members' image sets. Columns that are zero for every member
    /// contribute nothing.
    pub fn cem_row(&self, title: &Subset) -> Result<CemRow> {
        self.source.ensure_same(title.frame())?;
        if title.is_empty() {
            return Err(Error::EmptyFocalElement);
        }
        let members: Vec<usize> = title.indices().collect();
        if let [only] = members[..] {
            let entries = self
                .columns
                .iter()
                .zip(&self.rows[only])
                .filter(|(_, &m)| m != 0.0)
                .map(|(c, &m)| (c.clone(), m))
                .collect();
            return Ok(CemRow {
                title: title.clone(),
                entries,
                union_column: None,
                diverted: 0.0,
            });
        }

        let k = members.len() as f64;
        let union_mask = members
            .iter()
            .fold(0, |acc, &i| acc | self.row_unions[i].mask());
        let union = Subset::from_mask(&self.target, union_mask);

        let mut dense = vec![0.0; self.columns.len()];
        let mut blocked_total = 0.0;
        for (j, slot) in dense.iter_mut().enumerate() {
            let sum: f64 = members.iter().map(|&i| self.rows[i][j]).sum();
            if sum == 0.0 {
                continue;
            }
            if members.iter().all(|&i| self.rows[i][j] != 0.0) {
                *slot = sum / k;
            } else {
                blocked_total += sum;
            }
        }
        // the union column is the same for every blocked column of this row,
        // so the diverted averages are summed before dividing
        let diverted = blocked_total / k;

        let mut extra = 0.0;
        if diverted > 0.0 {
            match self.column_index(&union) {
                Some(j) => dense[j] += diverted,
                None => extra = diverted,
            }
        }
        let mut entries: Vec<(Subset, f64)> = self
            .columns
            .iter()
            .zip(dense)
            .filter(|(_, m)| *m != 0.0)
            .map(|(c, m)| (c.clone(), m))
            .collect();
        if extra > 0.0 {
            entries.push((union.clone(), extra));
        }
        Ok(CemRow {
            title: title.clone(),
            entries,
            union_column: Some(union),
            diverted,
        })
    }
}
