use crate::geometry::{Point, Polyline, Rect};

/// Clips `path` at the boundary of its end boxes: the result starts where the
/// path first leaves `source` and ends where it last enters `target`. Only the
/// first and last kept segments change, and they keep their direction.
///
/// When nothing is left between the two boxes (touching boxes), a tiny stub
/// around the midpoint of the gap is returned and the flag is set.
pub fn trim_route(path: &[Point], source: &Rect, target: &Rect) -> (Polyline, bool) {
    debug_assert!(path.len() >= 2);
    let n = path.len();

    // (segment index, parameter) of the first exit from the source box.
    let mut exit = (n - 2, 1.0);
    for i in 0..n - 1 {
        let (a, b) = (path[i], path[i + 1]);
        if source.contains(b) && i + 1 < n - 1 {
            continue;
        }
        let t = match source.clip_segment(a, b) {
            Some((_, t1)) if source.contains(a) => t1,
            _ => 0.0,
        };
        exit = (i, t);
        break;
    }
    // Last entry into the target box, scanning backwards.
    let mut entry = (0, 0.0);
    for j in (0..n - 1).rev() {
        let (a, b) = (path[j], path[j + 1]);
        if target.contains(a) && j > 0 {
            continue;
        }
        let t = match target.clip_segment(a, b) {
            Some((t0, _)) if target.contains(b) => t0,
            _ => 1.0,
        };
        entry = (j, t);
        break;
    }

    let p_exit = path[exit.0].lerp(path[exit.0 + 1], exit.1);
    let p_entry = path[entry.0].lerp(path[entry.0 + 1], entry.1);
    let ordered = exit.0 < entry.0 || (exit.0 == entry.0 && exit.1 < entry.1);
    if ordered {
        let mut pts = vec![p_exit];
        pts.extend_from_slice(&path[exit.0 + 1..=entry.0]);
        pts.push(p_entry);
        let mut line = Polyline::new(pts);
        line.dedup();
        if line.vertices.len() >= 2 {
            return (line, false);
        }
    }
    (stub(p_exit.midpoint(p_entry), path[0], path[n - 1], source, target), true)
}

fn stub(m: Point, s: Point, t: Point, source: &Rect, target: &Rect) -> Polyline {
    let size = source
        .width()
        .max(source.height())
        .max(target.width())
        .max(target.height())
        .max(1.0);
    let half = 1e-6 * size;
    let dir = (t - s).normalized().unwrap_or(Point::new(1.0, 0.0));
    Polyline::new(vec![m - dir * half, m + dir * half])
}
