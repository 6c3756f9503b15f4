// Scratch probe: renders one default film and prints the mean intensity
// curve at band-relevant frames. Not part of the deliverable.
#include <cstdio>

#include "thermoweld/preprocess/preprocess.hpp"
#include "thermoweld/thermal/render.hpp"

int main(int argc, char** argv) {
    using namespace tw;
    MaterialParams mat = default_material();
    RenderParams rp = default_render_params();
    if (argc > 1) mat.loss_time_constant_s = std::atof(argv[1]);
    if (argc > 2) rp.gain = std::atof(argv[2]);
    if (argc > 3) rp.env_flux_digits.assign(rp.frame_size(), std::atof(argv[3]));
    rp.detector_noise_sigma = 0.0;

    Rng rng(42);
    rp.emissivity_field = make_emissivity_field(rp.width, rp.height, rng);

    SpecimenSpec spec;
    spec.specimen_id = "probe";
    spec.nugget_center = {rp.width * 0.5, rp.height * 0.5};
    spec.nugget_diameter = 5.5e-3;

    LaserPulse pulse = default_pulse(rp);
    RenderStats stats;
    ThermalFilm film = render_film(spec, mat, pulse, rp, &stats);
    IntensityCurve c = mean_intensity_curve(film);

    std::printf("tau=%.3f gain=%.1f env=%.1f\n", mat.loss_time_constant_s, rp.gain,
                rp.env_flux_digits.front());
    std::printf("baseline(1-20):   %.1f .. %.1f\n", c.at_frame(1), c.at_frame(20));
    std::printf("F1 band frames 21-25: %.1f %.1f %.1f %.1f %.1f\n", c.at_frame(21),
                c.at_frame(22), c.at_frame(23), c.at_frame(24), c.at_frame(25));
    int argmax = 1;
    for (int f = 1; f <= c.n_frames(); ++f)
        if (c.at_frame(f) > c.at_frame(argmax)) argmax = f;
    std::printf("peak: frame %d = %.1f\n", argmax, c.at_frame(argmax));
    std::printf("frames 50-62:");
    for (int f = 50; f <= 62; ++f) std::printf(" %.0f", c.at_frame(f));
    std::printf("\nframes 61,70,75,80,100,135,170,210: %.0f %.0f %.0f %.0f %.0f %.0f %.0f %.0f\n",
                c.at_frame(61), c.at_frame(70), c.at_frame(75), c.at_frame(80), c.at_frame(100),
                c.at_frame(135), c.at_frame(170), c.at_frame(210));
    std::printf("tail 211,220,230,240,245,250: %.1f %.1f %.1f %.1f %.1f %.1f\n", c.at_frame(211),
                c.at_frame(220), c.at_frame(230), c.at_frame(240), c.at_frame(245), c.at_frame(250));
    std::printf("saturation: %.6f\n", stats.saturation_fraction());
    return 0;
}
