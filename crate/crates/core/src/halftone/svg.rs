//! SVG export of dot sets.

use std::fmt::Write;

/// Output size in SVG user units and the width of the image domain
/// `[0, aspect] × [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Canvas {
    pub width: f64,
    pub height: f64,
    pub aspect: f64,
}

impl Canvas {
    pub fn for_aspect(aspect: f64, height: f64) -> Self {
        Self {
            width: aspect * height,
            height,
            aspect,
        }
    }
}

/// One filled circle per dot. The domain has `y` pointing up, so rows are
/// flipped into the SVG convention.
pub fn export_svg(dots: &[[f64; 2]], radius: f64, canvas: Canvas) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = canvas.width,
        h = canvas.height
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for &[px, py] in dots {
        let x = px / canvas.aspect * canvas.width;
        let y = (1.0 - py) * canvas.height;
        let _ = writeln!(out, r#"<circle cx="{x:.4}" cy="{y:.4}" r="{radius}" fill="black"/>"#);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circles() {
        let canvas = Canvas::for_aspect(1.0, 200.0);
        let svg = export_svg(&[], 1.0, canvas);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<circle").count(), 0);
        let svg = export_svg(&[[0.5, 0.5]], 2.0, canvas);
        assert!(svg.contains(r#"<circle cx="100.0000" cy="100.0000" r="2""#));
        let many: Vec<[f64; 2]> = (0..10).map(|k| [k as f64 / 10.0, 0.3]).collect();
        assert_eq!(export_svg(&many, 1.0, canvas).matches("<circle").count(), 10);
        assert!(export_svg(&[[0.0, 1.0]], 1.0, canvas).contains(r#"cx="0.0000" cy="0.0000""#));
    }
}
