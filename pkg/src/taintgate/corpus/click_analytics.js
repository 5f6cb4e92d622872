// Analytics: counts clicks (fine), and probes click coordinates (not fine).
var clickCount = 0;
var section = document.getElementById("sect_name");
section.addEventListener("click", function clkHdlr(e) {
  clickCount = clickCount + 1;
  sendRequest("http://analytics.example/c?n=" + clickCount);
});
section.addEventListener("click", function probe(e) {
  sendRequest("http://analytics.example/x?px=" + e.x);
});
