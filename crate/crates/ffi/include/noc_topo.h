#ifndef NOC_TOPO_H
#define NOC_TOPO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. `NOC_STATUS_OK` is zero.
 */
typedef enum NocStatus {
  NOC_STATUS_OK = 0,
  NOC_STATUS_NULL_POINTER = 1,
  NOC_STATUS_INVALID_ARGUMENT = 2,
  NOC_STATUS_INVALID_TOPOLOGY = 3,
  NOC_STATUS_SIZE_UNSUPPORTED = 4,
  NOC_STATUS_ROUTING_FAILED = 5,
  NOC_STATUS_UNREACHABLE = 6,
  NOC_STATUS_SIMULATION_FAILED = 7,
  NOC_STATUS_PANIC = 8,
} NocStatus;

/**
 * Opaque topology handle.
 */
typedef struct NocTopology NocTopology;

/**
 * Results of `noc_simulate`.
 */
typedef struct NocSimStats {
  uint64_t packets_delivered;
  double avg_latency;
  uint64_t p99_latency;
  double throughput;
  uint64_t total_transfer_time;
} NocSimStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a topology. `family` is a name such as `"mesh"` or `"d2dmot"`; a
 * binary tree takes its `N` in `rows`.
 *
 * # Safety
 * `family` must be a valid C string and `out` a valid pointer.
 */
enum NocStatus noc_topology_build(const char *family,
                                  uint32_t rows,
                                  uint32_t cols,
                                  struct NocTopology **out);

/**
 * Loads a topology from the JSON written by `noc_topology_to_json`.
 *
 * # Safety
 * `json` must be a valid C string and `out` a valid pointer.
 */
enum NocStatus noc_topology_from_json(const char *json, struct NocTopology **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `topology` must come from this library and not be used afterwards.
 */
void noc_topology_free(struct NocTopology *topology);

/**
 * Router, link and IP core counts. Any output pointer may be null.
 *
 * # Safety
 * `topology` must be a live handle; non-null outputs must be valid.
 */
enum NocStatus noc_topology_counts(const struct NocTopology *topology,
                                   uint32_t *routers,
                                   uint32_t *links,
                                   uint32_t *ips);

/**
 * Largest shortest-path distance between any two routers.
 *
 * # Safety
 * `topology` must be a live handle and `out` a valid pointer.
 */
enum NocStatus noc_topology_diameter(const struct NocTopology *topology, uint32_t *out);

/**
 * Serializes to JSON; free the result with `noc_string_free`.
 *
 * # Safety
 * `topology` must be a live handle and `out` a valid pointer.
 */
enum NocStatus noc_topology_to_json(const struct NocTopology *topology, char **out);

/**
 * Hop count of the route from router `src` to router `dst`. `routing` is
 * `"xy"`, `"extxy"`, `"mot"`, `"d2dmot"`, `"table"`, or null for the
 * family's own algorithm.
 *
 * # Safety
 * `topology` must be a live handle, `routing` null or a valid C string,
 * `out` a valid pointer.
 */
enum NocStatus noc_route_length(const struct NocTopology *topology,
                                const char *routing,
                                uint32_t src,
                                uint32_t dst,
                                uint32_t *out);

/**
 * Uniform random traffic with the default warm-up and measurement windows.
 *
 * # Safety
 * `topology` must be a live handle, `routing` null or a valid C string,
 * `out` a valid pointer.
 */
enum NocStatus noc_simulate(const struct NocTopology *topology,
                            const char *routing,
                            double injection,
                            uint64_t seed,
                            uint32_t flits_per_packet,
                            bool wormhole,
                            struct NocSimStats *out);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library.
 */
const char *noc_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *noc_status_name(enum NocStatus status);

/**
 * Frees a string returned by the library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void noc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NOC_TOPO_H */
