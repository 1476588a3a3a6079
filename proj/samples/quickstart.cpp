// Analytic SNR of a DCO link, a short Monte Carlo cross-check, and the best
// uniform allocation at one peak power.

#include <cmath>
#include <cstdio>

#include "owc/channel.hpp"
#include "owc/gains.hpp"
#include "owc/optimize.hpp"

int main() {
  using namespace owc;
  const ChannelConfig ch{alpha_from_wavelength(450e-9, 2e7), 0.001, table1_gains()};
  const auto wf = WaveformConfig::uniform(Scheme::DCO, 64, 0.5, 2.0, 4.0);

  const auto stats = clip_stats(wf);
  std::printf("K=%.6f mu=%.6g sigma2=%.6g beta=%.6g\n", stats.K, stats.mu, stats.sigma2, stats.beta);

  SimulationOptions opt;
  opt.frames = 5000;
  opt.seed = 7;
  const auto emp = empirical_snr(wf, ch, opt);
  const auto theo = analyze(wf, ch);
  std::printf(" k   theo_dB  simu_dB\n");
  for (std::size_t i = 0; i < theo.size(); i += 6)
    std::printf("%2zu  %7.3f  %7.3f\n", theo[i].k, 10 * std::log10(theo[i].snr_analytic),
                10 * std::log10(emp[i].snr));

  AllocationProblem p{Scheme::DCO, 64, ch, 0.1, 0.1, LogBase::Natural};
  const auto u = uniform_allocate(p);
  std::printf("uniform allocation at 0.1 W peak: rate %.3f nats, sigma_y %.4g, bias %.4g, power %.4g\n",
              u.total_rate, u.sigma_y(), u.bias, u.power);
}
