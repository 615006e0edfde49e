#pragma once

#include "narrsmooth/amount.hpp"
#include "narrsmooth/analysis.hpp"
#include "narrsmooth/corpus.hpp"
#include "narrsmooth/dynamic.hpp"
#include "narrsmooth/errors.hpp"
#include "narrsmooth/export.hpp"
#include "narrsmooth/ingest.hpp"
#include "narrsmooth/interaction.hpp"
#include "narrsmooth/networks.hpp"
#include "narrsmooth/smoothing.hpp"
#include "narrsmooth/subtitles.hpp"
#include "narrsmooth/transcript.hpp"
