use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};

use super::{FeedFormat, PubDate};

pub(crate) fn pub_date(raw: &str, format: FeedFormat) -> Option<PubDate> {
    let raw = raw.trim();
    if raw.is_empty() {
        return None;
    }
    let parsed = match format {
        FeedFormat::Rss2 => parse_rfc822(raw),
        FeedFormat::Atom03 => parse_iso8601(raw),
    };
    Some(PubDate {
        raw: raw.to_string(),
        parsed,
    })
}

fn parse_rfc822(raw: &str) -> Option<DateTime<Utc>> {
    if let Ok(dt) = DateTime::parse_from_rfc2822(raw) {
        return Some(dt.with_timezone(&Utc));
    }
    // Date-only variants seen in the wild, e.g. "Fri, 23 Feb 2007".
    ["%a, %d %b %Y", "%d %b %Y"]
        .iter()
        .find_map(|f| NaiveDate::parse_from_str(raw, f).ok())
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|dt| dt.and_utc())
}

fn parse_iso8601(raw: &str) -> Option<DateTime<Utc>> {
    if let Ok(dt) = DateTime::parse_from_rfc3339(raw) {
        return Some(dt.with_timezone(&Utc));
    }
    if let Ok(dt) = NaiveDateTime::parse_from_str(raw, "%Y-%m-%dT%H:%M:%S") {
        return Some(dt.and_utc());
    }
    NaiveDate::parse_from_str(raw, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|dt| dt.and_utc())
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    #[test]
    fn rfc822_with_time() {
        let d = pub_date("Fri, 23 Feb 2007 10:30:00 +0100", FeedFormat::Rss2).unwrap();
        assert_eq!(d.parsed, Some(Utc.with_ymd_and_hms(2007, 2, 23, 9, 30, 0).unwrap()));
    }

    #[test]
    fn rfc822_date_only() {
        let d = pub_date("Fri, 23 Feb 2007", FeedFormat::Rss2).unwrap();
        assert_eq!(d.raw, "Fri, 23 Feb 2007");
        assert_eq!(d.parsed, Some(Utc.with_ymd_and_hms(2007, 2, 23, 0, 0, 0).unwrap()));
    }

    #[test]
    fn garbage_keeps_raw() {
        let d = pub_date("last tuesday", FeedFormat::Rss2).unwrap();
        assert_eq!(d.raw, "last tuesday");
        assert!(d.parsed.is_none());
    }

    #[test]
    fn atom_dates() {
        let d = pub_date("2006-11-02T18:00:00Z", FeedFormat::Atom03).unwrap();
        assert_eq!(d.parsed, Some(Utc.with_ymd_and_hms(2006, 11, 2, 18, 0, 0).unwrap()));
        let d = pub_date("2006-11-02", FeedFormat::Atom03).unwrap();
        assert!(d.parsed.is_some());
        assert!(pub_date("  ", FeedFormat::Atom03).is_none());
    }
}
