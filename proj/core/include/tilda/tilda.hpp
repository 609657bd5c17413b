#pragma once

#include "tilda/anchor_bank.hpp"
#include "tilda/config.hpp"
#include "tilda/dataset.hpp"
#include "tilda/errors.hpp"
#include "tilda/experiment.hpp"
#include "tilda/fixedpoint.hpp"
#include "tilda/hwsim.hpp"
#include "tilda/quantized.hpp"
#include "tilda/replay.hpp"
#include "tilda/report.hpp"
#include "tilda/settings.hpp"
#include "tilda/synthetic.hpp"
#include "tilda/vote.hpp"
