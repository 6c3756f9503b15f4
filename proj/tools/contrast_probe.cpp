// Scratch probe: normalized nugget-vs-annulus contrast, criterion-3 style.
#include <cstdio>
#include <cmath>
#include "thermoweld/preprocess/preprocess.hpp"
#include "thermoweld/thermal/render.hpp"

using namespace tw;

int main() {
    int n_good = 0, n_pass = 0;
    ParamRanges ranges;
    for_each_generated_film(40, ClassMix{}, 777, ranges, default_material(), default_render_params(),
        [&](GeneratedFilm&& g) {
            if (g.specimen.quality_class != QualityClass::good) return;
            ++n_good;
            NormalizedFilm nf = normalize_film(g.film);
            const double r_px = 0.5 * g.specimen.nugget_diameter / 133e-6;
            double cx = g.specimen.nugget_center.x, cy = g.specimen.nugget_center.y;
            double in_sum = 0, out_sum = 0; long in_n = 0, out_n = 0;
            for (int f = 61; f <= 100; ++f)
            for (int y = 0; y < nf.height; ++y)
            for (int x = 0; x < nf.width; ++x) {
                if (!nf.is_valid(y, x)) continue;
                double d = std::hypot(x - cx, y - cy);
                double v = nf.at(f - 1, y, x);
                if (d <= r_px) { in_sum += v; ++in_n; }
                else if (d >= 1.3 * r_px && d <= 1.8 * r_px) { out_sum += v; ++out_n; }
            }
            double vin = in_sum / in_n, vout = out_sum / out_n;
            bool ok = vin < vout;
            n_pass += ok;
            std::printf("%s d=%.2fmm in=%.3f out=%.3f %s\n", g.specimen.specimen_id.c_str(),
                        g.specimen.nugget_diameter * 1e3, vin, vout, ok ? "ok" : "FAIL");
            // denominator health: valid fraction
            long nv = 0; for (auto b : nf.valid) nv += b;
            std::printf("  valid=%.4f\n", double(nv) / nf.valid.size());
        });
    std::printf("good films: %d, contrast ok: %d\n", n_good, n_pass);
    return 0;
}
