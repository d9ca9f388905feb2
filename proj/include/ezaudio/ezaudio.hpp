#pragma once

#include "ezaudio/audio_io.hpp"
#include "ezaudio/csv.hpp"
#include "ezaudio/elzaki_codec.hpp"
#include "ezaudio/error.hpp"
#include "ezaudio/fft.hpp"
#include "ezaudio/fixtures.hpp"
#include "ezaudio/keyfile.hpp"
#include "ezaudio/lorenz.hpp"
#include "ezaudio/metrics.hpp"
