use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::text::number_word;

/// How many ranked paths receive a spoken shortcut.
pub const HISTORY_SHORTCUTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRecord {
    pub path: Vec<usize>,
    pub visit_count: u64,
    pub last_visited: DateTime<Utc>,
    /// Set when a feed refresh changed the item this path pointed at.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub stale: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryShortcut {
    pub phrase: String,
    pub path: Vec<usize>,
}

/// Counts one visit to `path`. Stale records are left alone; a visit to a
/// path whose only record is stale starts a fresh record.
pub fn record_path(history: &mut Vec<PathRecord>, path: &[usize], now: DateTime<Utc>) {
    match history.iter_mut().find(|r| !r.stale && r.path == path) {
        Some(record) => {
            record.visit_count += 1;
            record.last_visited = now;
        }
        None => history.push(PathRecord {
            path: path.to_vec(),
            visit_count: 1,
            last_visited: now,
            stale: false,
        }),
    }
}

/// Most visited first, then most recent, then by path.
pub fn rank_paths(history: &[PathRecord]) -> Vec<PathRecord> {
    let mut ranked = history.to_vec();
    ranked.sort_by(|a, b| {
        b.visit_count
            .cmp(&a.visit_count)
            .then(b.last_visited.cmp(&a.last_visited))
            .then(a.path.cmp(&b.path))
            .then(a.stale.cmp(&b.stale))
    });
    ranked
}

/// Spoken shortcuts ("history one" ... "history five") for the best
/// non-stale paths of a ranked history.
pub fn assign_history_shortcuts(ranked: &[PathRecord]) -> Vec<HistoryShortcut> {
    ranked
        .iter()
        .filter(|r| !r.stale)
        .take(HISTORY_SHORTCUTS)
        .enumerate()
        .map(|(i, r)| HistoryShortcut {
            phrase: format!("history {}", number_word(i + 1)),
            path: r.path.clone(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn at(secs: i64) -> DateTime<Utc> {
        Utc.timestamp_opt(secs, 0).unwrap()
    }

    fn rec(path: &[usize], visits: u64, secs: i64) -> PathRecord {
        PathRecord {
            path: path.to_vec(),
            visit_count: visits,
            last_visited: at(secs),
            stale: false,
        }
    }

    #[test]
    fn first_visit_appends() {
        let mut h = Vec::new();
        record_path(&mut h, &[2], at(1));
        assert_eq!(h, [rec(&[2], 1, 1)]);
    }

    #[test]
    fn repeat_visit_increments() {
        let mut h = vec![rec(&[2], 1, 1)];
        record_path(&mut h, &[2], at(5));
        assert_eq!(h, [rec(&[2], 2, 5)]);
    }

    #[test]
    fn stale_records_are_not_reused() {
        let mut old = rec(&[2], 4, 1);
        old.stale = true;
        let mut h = vec![old.clone()];
        record_path(&mut h, &[2], at(9));
        assert_eq!(h, [old, rec(&[2], 1, 9)]);
    }

    #[test]
    fn ranking_orders() {
        let ranked = rank_paths(&[rec(&[1], 3, 0), rec(&[2], 5, 0)]);
        assert_eq!(ranked[0].path, [2]);
        let ranked = rank_paths(&[rec(&[1], 3, 10), rec(&[2], 3, 20)]);
        assert_eq!(ranked[0].path, [2]);
        let ranked = rank_paths(&[rec(&[2], 3, 10), rec(&[1, 1], 3, 10), rec(&[1], 3, 10)]);
        let paths: Vec<_> = ranked.iter().map(|r| r.path.clone()).collect();
        assert_eq!(paths, [vec![1], vec![1, 1], vec![2]]);
    }

    #[test]
    fn shortcuts_cover_top_five() {
        assert!(assign_history_shortcuts(&[]).is_empty());
        let two = assign_history_shortcuts(&[rec(&[4], 2, 0), rec(&[1], 1, 0)]);
        assert_eq!(
            two,
            [
                HistoryShortcut { phrase: "history one".into(), path: vec![4] },
                HistoryShortcut { phrase: "history two".into(), path: vec![1] },
            ]
        );
        let seven: Vec<_> = (1..=7).map(|i| rec(&[i], 10 - i as u64, 0)).collect();
        let s = assign_history_shortcuts(&rank_paths(&seven));
        assert_eq!(s.len(), 5);
        assert_eq!(s[4].phrase, "history five");
        assert_eq!(s[4].path, [5]);
    }

    #[test]
    fn stale_paths_get_no_shortcut() {
        let mut gone = rec(&[3], 9, 0);
        gone.stale = true;
        let s = assign_history_shortcuts(&rank_paths(&[gone, rec(&[1], 1, 0)]));
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].path, [1]);
    }
}
