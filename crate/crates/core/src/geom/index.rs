use std::collections::HashMap;

/// Axis-aligned `f64` box, already inflated by coordinate error bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl BBox {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Self {
        BBox { xmin, xmax, ymin, ymax }
    }

    pub fn empty() -> Self {
        BBox::new(f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY)
    }

    pub fn union(&self, o: &BBox) -> BBox {
        BBox::new(self.xmin.min(o.xmin), self.xmax.max(o.xmax), self.ymin.min(o.ymin), self.ymax.max(o.ymax))
    }

    /// Conservative: non-finite boxes always intersect.
    pub fn intersects(&self, o: &BBox) -> bool {
        if !(self.is_finite() && o.is_finite()) {
            return true;
        }
        self.xmin <= o.xmax && o.xmin <= self.xmax && self.ymin <= o.ymax && o.ymin <= self.ymax
    }

    pub fn is_finite(&self) -> bool {
        self.xmin.is_finite() && self.xmax.is_finite() && self.ymin.is_finite() && self.ymax.is_finite()
    }

    pub fn inflate(&self, r: f64) -> BBox {
        BBox::new(self.xmin - r, self.xmax + r, self.ymin - r, self.ymax + r)
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }
}

const MAX_CELLS_PER_BOX: i64 = 256;

/// Uniform grid over segment boxes for candidate-pair queries.
#[derive(Debug)]
pub struct SegmentIndex {
    boxes: Vec<BBox>,
    cell: f64,
    x0: f64,
    y0: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
    /// Boxes too large (or non-finite) for the grid; tested against everything.
    big: Vec<usize>,
}

impl SegmentIndex {
    pub fn new(boxes: Vec<BBox>) -> Self {
        let finite: Vec<&BBox> = boxes.iter().filter(|b| b.is_finite()).collect();
        let all = finite.iter().fold(BBox::empty(), |a, b| a.union(b));
        let mut sizes: Vec<f64> = finite.iter().map(|b| b.width().max(b.height())).collect();
        sizes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = sizes.get(sizes.len() / 2).copied().unwrap_or(1.0);
        let extent = if all.is_finite() { all.width().max(all.height()) } else { 1.0 };
        let n = boxes.len().max(1) as f64;
        let mut cell = median.max(extent / n.sqrt().max(1.0) / 4.0);
        if !(cell.is_finite() && cell > 0.0) {
            cell = if extent > 0.0 && extent.is_finite() { extent } else { 1.0 };
        }
        let (x0, y0) = if all.is_finite() { (all.xmin, all.ymin) } else { (0.0, 0.0) };
        let mut idx = SegmentIndex { boxes: Vec::new(), cell, x0, y0, cells: HashMap::new(), big: Vec::new() };
        for (i, b) in boxes.iter().enumerate() {
            idx.insert_box(i, b);
        }
        idx.boxes = boxes;
        idx
    }

    fn range(&self, b: &BBox) -> Option<(i64, i64, i64, i64)> {
        if !b.is_finite() {
            return None;
        }
        let cx0 = ((b.xmin - self.x0) / self.cell).floor();
        let cx1 = ((b.xmax - self.x0) / self.cell).floor();
        let cy0 = ((b.ymin - self.y0) / self.cell).floor();
        let cy1 = ((b.ymax - self.y0) / self.cell).floor();
        let lim = 1e15;
        if ![cx0, cx1, cy0, cy1].iter().all(|v| v.abs() < lim) {
            return None;
        }
        let (cx0, cx1, cy0, cy1) = (cx0 as i64, cx1 as i64, cy0 as i64, cy1 as i64);
        if (cx1 - cx0 + 1).saturating_mul(cy1 - cy0 + 1) > MAX_CELLS_PER_BOX {
            return None;
        }
        Some((cx0, cx1, cy0, cy1))
    }

    fn insert_box(&mut self, i: usize, b: &BBox) {
        match self.range(b) {
            None => self.big.push(i),
            Some((cx0, cx1, cy0, cy1)) => {
                for cx in cx0..=cx1 {
                    for cy in cy0..=cy1 {
                        self.cells.entry((cx, cy)).or_default().push(i);
                    }
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Sorted ids of indexed boxes overlapping `b`.
    pub fn query(&self, b: &BBox) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        match self.range(b) {
            None => {
                out.extend((0..self.boxes.len()).filter(|&i| self.boxes[i].intersects(b)));
                return out;
            }
            Some((cx0, cx1, cy0, cy1)) => {
                for cx in cx0..=cx1 {
                    for cy in cy0..=cy1 {
                        if let Some(v) = self.cells.get(&(cx, cy)) {
                            out.extend(v.iter().copied().filter(|&i| self.boxes[i].intersects(b)));
                        }
                    }
                }
            }
        }
        out.extend(self.big.iter().copied().filter(|&i| self.boxes[i].intersects(b)));
        out.sort_unstable();
        out.dedup();
        out
    }

    /// All pairs `(i, j)`, `i < j`, with overlapping boxes, sorted.
    pub fn candidate_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let _ = self.for_each_pair(|i, j| {
            out.push((i, j));
            Ok::<bool, ()>(false)
        });
        out.sort_unstable();
        out
    }

    /// Calls `f(i, j)`, `i < j`, once per pair of overlapping boxes, cells in
    /// sorted order; stops at the first `true` and returns it.
    pub fn for_each_pair<E>(&self, mut f: impl FnMut(usize, usize) -> Result<bool, E>) -> Result<bool, E> {
        let ranges: Vec<Option<(i64, i64, i64, i64)>> = self.boxes.iter().map(|b| self.range(b)).collect();
        let mut keys: Vec<&(i64, i64)> = self.cells.keys().collect();
        keys.sort_unstable();
        for key in keys {
            let v = &self.cells[key];
            for (k, &i) in v.iter().enumerate() {
                let ri = ranges[i].expect("gridded box");
                for &j in &v[k + 1..] {
                    let rj = ranges[j].expect("gridded box");
                    // report the pair only from the lowest cell both boxes share
                    if (ri.0.max(rj.0), ri.2.max(rj.2)) != *key || !self.boxes[i].intersects(&self.boxes[j]) {
                        continue;
                    }
                    if f(i.min(j), i.max(j))? {
                        return Ok(true);
                    }
                }
            }
        }
        for (k, &i) in self.big.iter().enumerate() {
            for j in 0..self.boxes.len() {
                if i == j || (ranges[j].is_none() && self.big[..k].contains(&j)) {
                    continue;
                }
                if self.boxes[i].intersects(&self.boxes[j]) && f(i.min(j), i.max(j))? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_match_brute_force() {
        let mut boxes = Vec::new();
        let mut s = 12345u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..300 {
            let x = next() * 10.0;
            let y = next() * 10.0;
            let w = next() * next() * 3.0;
            let h = next() * 0.5;
            boxes.push(BBox::new(x, x + w, y, y + h));
        }
        boxes.push(BBox::new(-1e300, 1e300, 4.0, 5.0));
        let idx = SegmentIndex::new(boxes.clone());
        let mut brute = Vec::new();
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                if boxes[i].intersects(&boxes[j]) {
                    brute.push((i, j));
                }
            }
        }
        assert_eq!(idx.candidate_pairs(), brute);
        let q = BBox::new(2.0, 3.0, 2.0, 3.0);
        let brute_q: Vec<usize> = (0..boxes.len()).filter(|&i| boxes[i].intersects(&q)).collect();
        assert_eq!(idx.query(&q), brute_q);
    }
}
