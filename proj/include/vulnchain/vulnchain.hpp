#pragma once

// Umbrella header: the whole prioritization library.

#include "vulnchain/cve_id.hpp"
#include "vulnchain/cvss.hpp"
#include "vulnchain/date.hpp"
#include "vulnchain/engine.hpp"
#include "vulnchain/error.hpp"
#include "vulnchain/evaluation.hpp"
#include "vulnchain/feeds/epss.hpp"
#include "vulnchain/feeds/ground_truth.hpp"
#include "vulnchain/feeds/kev.hpp"
#include "vulnchain/feeds/nvd.hpp"
#include "vulnchain/feeds/snapshot.hpp"
#include "vulnchain/json_io.hpp"
#include "vulnchain/record.hpp"
#include "vulnchain/report.hpp"
#include "vulnchain/store.hpp"
