#pragma once

#include "lorasim/analytic_dft.hpp"
#include "lorasim/channel.hpp"
#include "lorasim/fft.hpp"
#include "lorasim/montecarlo.hpp"
#include "lorasim/parallel.hpp"
#include "lorasim/rng.hpp"
#include "lorasim/ser_interference.hpp"
#include "lorasim/ser_mpc.hpp"
#include "lorasim/special_fn.hpp"
#include "lorasim/sweep.hpp"
#include "lorasim/types.hpp"
#include "lorasim/waveform.hpp"
