// Analytics that phones home on every click it observes.
var pings = 0;
var section = document.getElementById("sect_name");
section.addEventListener("click", function (e) {
  pings = pings + 1;
  sendRequest("http://analytics.example/ping?n=" + pings);
});
